#pragma once

#include <cstdint>
#include <vector>

#include "chain.hpp"

namespace ioncool {

// Carrier flopping of one or more ions under thermal motion of the normal
// modes. Traces report the excitation out of the initial spin state, i.e.
// 1/2 (1 - sum_n P_n cos(Omega_nn t)), which starts at 0 and rises.
struct FlopTrace {
  std::vector<double> times;
  std::vector<double> excitation;
  std::vector<double> std_error;  // empty unless Monte Carlo
};

// Single ion, single thermal mode: Omega_nn = Omega_0 e^{-eta^2/2} L_n(eta^2).
FlopTrace single_ion_carrier(double nbar, double eta, double omega0,
                             const std::vector<double>& times);

struct CarrierModel {
  ModeStructure modes;
  std::vector<double> nbars;           // per mode
  std::vector<double> omega0_per_ion;  // rad/s, beam-profile weighted

  void validate() const;
};

// Gaussian beam-profile weights along the chain for a two-beam Raman drive:
// omega0_i = omega0 exp(-2 z_i^2 / w_z^2) with w_z the per-beam waist
// projected on the trap axis.
std::vector<double> beam_profile_weights(const TrapConfig& cfg, double omega0,
                                         double waist_z);

// Ground-state carrier rate Omega_0 prod_m e^{-eta_im^2/2}.
double carrier_rabi_ground(const ModeStructure& modes, int ion, double omega0);

struct EnumerationOptions {
  double tail_tol = 1e-8;
  long budget = 1000000;  // max joint Fock configurations
};

// Exact sum over the product Fock lattice; throws BudgetError (telling the
// caller to use the Monte Carlo variant) when the lattice exceeds budget.
FlopTrace multimode_carrier_exact(const CarrierModel& model, int ion,
                                  const std::vector<double>& times,
                                  const EnumerationOptions& opt = {});

struct McOptions {
  int n_samples = 20000;
  std::uint64_t seed = 1;
  bool stratify_com = true;  // enumerate the dominant mode exactly
  int threads = 0;
};

// Unbiased sampler of the same sum; per-point standard errors reported.
FlopTrace multimode_carrier_mc(const CarrierModel& model, int ion,
                               const std::vector<double>& times, const McOptions& opt = {});

struct ComFitOptions {
  double nbar_max = 5.0;
  double nbar_step = 0.05;
  bool prefit_exponential = true;  // damped-cosine smoothing of the traces first
};

struct ComFitResult {
  double nbar = 0.0;
  double uncertainty = 0.0;  // curvature-based
  double sse = 0.0;
  bool flat = false;         // objective had no usable curvature
};

// Least-squares search of the COM-mode nbar, all other modes held in the
// ground state. traces[i] is the measured excitation of ion i.
ComFitResult fit_com_nbar(const std::vector<FlopTrace>& traces, const CarrierModel& model,
                          const ComFitOptions& opt = {});

// Damped-cosine smoothing fit exc = 1/2 (1 - e^{-g t} cos(W t)); returns the
// fitted curve sampled at the trace times.
std::vector<double> exponential_prefit(const FlopTrace& trace);

}  // namespace ioncool
