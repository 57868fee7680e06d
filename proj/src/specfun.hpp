#pragma once

#include <vector>

namespace ioncool {

// Generalized Laguerre polynomial L_n^(alpha)(x) by the three-term recurrence.
double laguerre(int n, int alpha, double x);

// L_k^(alpha)(x) for k = 0..n_max in one upward sweep.
std::vector<double> laguerre_sequence(int n_max, int alpha, double x);

// Fock matrix element of the displacement e^{i eta (a + a^dag)}:
//   <n+s| D |n> = i^s e^{-eta^2/2} eta^s sqrt(n!/(n+s)!) L_n^(s)(eta^2)
// signed: the real factor above (factorial ratio in log space).
// displacement_element returns its magnitude.
double displacement_element_signed(int n, int s, double eta);
double displacement_element(int n, int s, double eta);

// Thermal phonon distribution P(n) = nbar^n/(nbar+1)^{n+1}.
struct ThermalMode {
  double nbar = 0.0;
  int n_cut = 0;

  // geometric tail mass beyond n_cut
  double tail_mass() const;
};

// Smallest cutoff with tail mass below tol, clamped to [min_cut, max_cut].
int thermal_cutoff(double nbar, double tol, int min_cut = 0, int max_cut = 512);

std::vector<double> thermal_weights(const ThermalMode& mode);

// Thermally averaged first-order red-sideband Rabi rate
//   Omega_12(nbar) = Omega_0 sum_{n>=1} P(n) e^{-eta^2/2} eta L_{n-1}^(1)(eta^2)/sqrt(n).
// The per-term factor is the standard |<n-1|D|n>| element. With
// printed_index = true the sum instead pairs 1/sqrt(n) with L_n^(1), which
// some references print; the two differ beyond the Lamb-Dicke regime and the
// standard element is the one validated against the displacement oracle.
struct RsbRabiTable {
  RsbRabiTable(double eta, double omega0, int n_cut, bool printed_index = false);
  double operator()(double nbar) const;

  double eta;
  double omega0;
  std::vector<double> coeff;  // coeff[n-1] multiplies P(n)
};

double thermal_rsb_rabi(double nbar, double eta, double omega0,
                        bool printed_index = false);

}  // namespace ioncool
