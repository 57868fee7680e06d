#pragma once

#include <atomic>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace ioncool {

// Runs job(i) for i in [0, count) on a bounded pool. Jobs must write only to
// their own output slot; completion order is irrelevant to results.
inline void parallel_for(std::size_t count, const std::function<void(std::size_t)>& job,
                         int threads = 0) {
  if (count == 0) return;
  unsigned n = threads > 0 ? static_cast<unsigned>(threads)
                           : std::max(1u, std::thread::hardware_concurrency());
  n = std::min<unsigned>(n, static_cast<unsigned>(count));
  if (n <= 1) {
    for (std::size_t i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(n);
  for (unsigned w = 0; w < n; ++w)
    pool.emplace_back([&]() {
      for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) job(i);
    });
  for (auto& t : pool) t.join();
}

}  // namespace ioncool
