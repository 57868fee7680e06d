#pragma once

#include <array>
#include <complex>
#include <vector>

#include "constants.hpp"

namespace ioncool {

using Mat4 = std::array<std::complex<double>, 16>;  // row-major 4x4

// Couplings of the 4-level scheme: |1> qubit down, |2> qubit up, |3> aux,
// |4> excited. omega12 drives the RSB Raman transition, omega24/omega34 the
// two pump beams, delta is the R2 detuning, gamma the excited-state
// linewidth. Branching fractions are the decay weights to levels 1..3.
struct FourLevelParams {
  double omega12 = 0.0;
  double omega24 = khz_to_rad(700.0);
  double omega34 = khz_to_rad(600.0);
  double delta = khz_to_rad(-10.0);
  double gamma = kTwoPi * 19.4e6;
  std::array<double, 3> branching = {2.0 / 3.0, 0.25, 1.0 / 12.0};

  void validate() const;  // branching sums to 1 within 1e-12
};

Mat4 build_hamiltonian(const FourLevelParams& p);

// d rho/dt = -i[H, rho] + sum_m (C_m rho C_m^dag - 1/2 {C_m^dag C_m, rho})
// with C_m = sqrt(branching_m * gamma) |m><4|. Traceless by construction.
Mat4 lindblad_rhs(const Mat4& rho, const FourLevelParams& p);

// Fixed-step RK4 propagation for time t. Throws NumericError if the result
// violates the density-matrix invariants beyond tolerance.
Mat4 evolve(const Mat4& rho0, const FourLevelParams& p, double t, double dt);

// dt <= 0.05 / max(gamma, couplings, |delta|)
double stable_step(const FourLevelParams& p);

Mat4 ground_state_rho();  // |1><1|

// invariant checks
double trace_error(const Mat4& rho);       // |tr - 1|
double hermiticity_error(const Mat4& rho); // max |rho - rho^dag|

struct CoolingTrajectory {
  std::vector<double> times;
  std::vector<double> nbar;
  std::vector<double> rho44;

  double final_nbar() const { return nbar.back(); }
  // first sampled time with nbar <= target, -1 if never reached
  double time_to(double target) const;
};

struct CoolingOptions {
  double pump_scale = 1.0;   // scales omega24 and omega34 jointly
  double dt = 0.0;           // 0 = stable_step
  int samples = 600;         // stored points along the trajectory
  // Cooling rate dnbar/dt = -branching_1 * gamma * rho44. When
  // printed_third_factor is set the rate is divided by 3, evaluating the
  // published recursion literally; that variant cools ~3x slower than the
  // reference dynamics and is kept for comparison only.
  bool printed_third_factor = false;
  bool printed_rsb_index = false;  // see RsbRabiTable
};

// Joint integration of the 4-level master equation with the quasi-static
// thermal RSB coupling: Omega_12 is refreshed from the current nbar at every
// RHS evaluation, nbar is floored at 0. Starts from |1><1|.
CoolingTrajectory cooling_trajectory(double nbar0, double eta, double omega0,
                                     double duration, const CoolingOptions& opt = {});

}  // namespace ioncool
