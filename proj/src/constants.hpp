#pragma once

// CODATA 2018 values. All unit conversions in the toolkit go through this
// table; angular frequencies are rad/s everywhere outside the config layer.
namespace ioncool {

inline constexpr double kHbar = 1.054571817e-34;      // J s
inline constexpr double kAmu = 1.66053906660e-27;     // kg
inline constexpr double kBoltzmann = 1.380649e-23;    // J/K
inline constexpr double kElementaryCharge = 1.602176634e-19;  // C
inline constexpr double kCoulomb = 8.9875517923e9;    // N m^2 / C^2
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

inline constexpr double khz_to_rad(double f_khz) { return kTwoPi * 1e3 * f_khz; }
inline constexpr double mhz_to_rad(double f_mhz) { return kTwoPi * 1e6 * f_mhz; }
inline constexpr double hz_to_rad(double f_hz) { return kTwoPi * f_hz; }
inline constexpr double rad_to_hz(double w) { return w / kTwoPi; }

}  // namespace ioncool
