#pragma once

#include <cstdint>

namespace ioncool {

// Splittable counter-based random stream (splitmix64 finalizer over a keyed
// counter). Values depend only on (seed, stream, counter), so samples are
// reproducible no matter how work is scheduled across threads.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t bits(std::uint64_t stream, std::uint64_t counter) const {
    std::uint64_t z = seed_;
    z ^= mix(stream * 0xA0761D6478BD642FULL + 0x8EBC6AF09C88C6E3ULL);
    z ^= mix(counter * 0xE7037ED1A0B428DBULL + 0x589965CC75374CC3ULL);
    return mix(z);
  }

  // uniform in [0, 1)
  double uniform(std::uint64_t stream, std::uint64_t counter) const {
    return (bits(stream, counter) >> 11) * 0x1.0p-53;
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t seed_;
};

}  // namespace ioncool
