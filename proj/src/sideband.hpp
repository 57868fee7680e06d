#pragma once

#include <complex>
#include <string>
#include <vector>

#include "chain.hpp"

namespace ioncool {

// Amplitudes over the product basis |s_1..s_N> (x) |n>, spin-major:
// index = spin_mask * (n_cut+1) + n, bit i set = spin i up.
struct SpinPhononState {
  int n_ions = 0;
  int n_cut = 0;
  std::vector<std::complex<double>> amp;

  std::size_t dim() const { return amp.size(); }
  double norm() const;
};

SpinPhononState basis_state(int n_ions, int n_cut, unsigned spin_mask, int n_phonon);

enum class Sideband { red, blue };
enum class LdOrder { third, full };

// Resonant first-sideband spin-phonon coupling of N spins to one mode in the
// drive's rotating frame. Couplings are real by gauge choice:
//   red:  g_n = <n-1| coupling |n>, blue: g_n = <n+1| coupling |n>
// full uses the exact displacement matrix element (signed); third uses the
// Lamb-Dicke expansion through eta^3, g_red(n) = eta sqrt(n) (1 - n eta^2/2).
// A detuned drive adds -delta per excited spin on the diagonal.
struct SidebandHamiltonian {
  int n_ions = 0;
  int n_cut = 0;
  Sideband sign = Sideband::red;
  LdOrder order = LdOrder::full;
  std::vector<double> etas;
  double omega0 = 0.0;
  double delta = 0.0;

  // CSR, real symmetric
  std::vector<int> row_ptr;
  std::vector<int> col;
  std::vector<double> val;

  std::size_t dim() const { return (std::size_t(1) << n_ions) * (n_cut + 1); }
  void apply(const std::complex<double>* x, std::complex<double>* y) const;
  double gershgorin_bound() const;
  double hermiticity_error() const;  // max |H_ij - H_ji| over stored entries
};

double sideband_coupling(Sideband sign, LdOrder order, double eta, int n_from);

// Budget: N <= 6, n_cut <= 64; beyond that throws BudgetError.
SidebandHamiltonian build_sideband_hamiltonian(const std::vector<double>& etas,
                                               double omega0, Sideband sign, LdOrder order,
                                               double delta, int n_cut);

// RK4 with per-step renormalization; the step is halved until two successive
// refinements agree to 1e-7 in max amplitude difference.
SpinPhononState evolve_state(const SidebandHamiltonian& h, const SpinPhononState& psi0,
                             double t);

// Mean fraction of spins flipped out of the all-down initial configuration.
double brightness(const SpinPhononState& psi);

struct RatioCurve {
  std::vector<double> nbar_grid;
  std::vector<double> ratio;       // R = A_red(T)/A_blue(T)
  std::vector<double> a_red;
  std::vector<double> a_blue;
  double probe_time = 0.0;
  double alpha = 1.0;              // nbar = alpha R / (1 - alpha R)
  int n_ions = 0;
};

struct RatioOptions {
  LdOrder order = LdOrder::full;
  double probe_time = 0.0;   // 0 = argmax of BSB brightness at the central grid nbar
  int time_points = 241;
  double time_max = 0.0;     // 0 = auto from the n=0 blue element
  int n_cut = 0;             // 0 = max(16, 8*max nbar)
  int threads = 0;
};

// Thermal mixtures as weighted pure-state runs per initial Fock state.
RatioCurve ratio_curve(const std::vector<double>& etas, double omega0,
                       const std::vector<double>& nbar_grid, const RatioOptions& opt = {});

struct NbarEstimate {
  double nbar = 0.0;
  double lower = 0.0, upper = 0.0;  // bracketing grid interval
  double alpha = 1.0;
  bool lower_bound_only = false;    // R at or beyond the top of the curve
  bool clamped = false;             // R below the curve range
};

NbarEstimate extract_nbar(double r_measured, const RatioCurve& curve);

// nbar bound from half the peak-to-peak noise over the normalized BSB
// amplitude.
NbarEstimate upper_bound_nbar(double noise_amplitude, double bsb_amplitude,
                              const RatioCurve& curve);

struct SpectrumPoint {
  int mode = 0;
  std::string sideband;   // "red" | "blue"
  double detuning = 0.0;  // rad/s from the sideband resonance
  double excitation = 0.0;
  double normalized = 0.0;  // BSB peak of each mode scaled to 1
  double probe_time = 0.0;
};

struct SpectrumOptions {
  LdOrder order = LdOrder::full;
  int n_cut = 0;
  int threads = 0;
};

// Excitation vs detuning around the first red and blue sideband of each
// mode, one mode at a time, thermal initial phonons.
std::vector<SpectrumPoint> spectrum_scan(const ModeStructure& modes,
                                         const std::vector<double>& nbars, double omega0,
                                         double probe_time,
                                         const std::vector<double>& detuning_grid,
                                         const SpectrumOptions& opt = {});

}  // namespace ioncool
