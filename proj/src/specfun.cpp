#include "specfun.hpp"

#include <cmath>
#include <stdexcept>

#include "errors.hpp"

namespace ioncool {

double laguerre(int n, int alpha, double x) {
  if (n < 0 || alpha < 0) throw std::invalid_argument("laguerre: n, alpha must be >= 0");
  if (n == 0) return 1.0;
  double lm1 = 1.0;               // L_0
  double l = 1.0 + alpha - x;     // L_1
  for (int k = 1; k < n; ++k) {
    const double lp1 = ((2.0 * k + 1.0 + alpha - x) * l - (k + alpha) * lm1) / (k + 1.0);
    lm1 = l;
    l = lp1;
  }
  return l;
}

std::vector<double> laguerre_sequence(int n_max, int alpha, double x) {
  std::vector<double> out(n_max + 1);
  out[0] = 1.0;
  if (n_max == 0) return out;
  out[1] = 1.0 + alpha - x;
  for (int k = 1; k < n_max; ++k)
    out[k + 1] = ((2.0 * k + 1.0 + alpha - x) * out[k] - (k + alpha) * out[k - 1]) / (k + 1.0);
  return out;
}

double displacement_element_signed(int n, int s, double eta) {
  if (n < 0 || s < 0) throw std::invalid_argument("displacement_element: n, s must be >= 0");
  if (eta == 0.0) return s == 0 ? 1.0 : 0.0;
  // factorial ratio in log space to stay finite for large n
  const double log_mag = -0.5 * eta * eta + s * std::log(std::abs(eta)) +
                         0.5 * (std::lgamma(n + 1.0) - std::lgamma(n + s + 1.0));
  return std::exp(log_mag) * laguerre(n, s, eta * eta);
}

double displacement_element(int n, int s, double eta) {
  return std::abs(displacement_element_signed(n, s, eta));
}

double ThermalMode::tail_mass() const {
  if (nbar <= 0.0) return 0.0;
  const double q = nbar / (nbar + 1.0);
  return std::pow(q, n_cut + 1.0);
}

int thermal_cutoff(double nbar, double tol, int min_cut, int max_cut) {
  if (nbar <= 0.0) return min_cut;
  const double q = nbar / (nbar + 1.0);
  // q^{n+1} < tol  =>  n > ln(tol)/ln(q) - 1
  const int n = static_cast<int>(std::ceil(std::log(tol) / std::log(q))) ;
  return std::min(std::max(n, min_cut), max_cut);
}

std::vector<double> thermal_weights(const ThermalMode& mode) {
  std::vector<double> p(mode.n_cut + 1, 0.0);
  if (mode.nbar <= 0.0) {
    p[0] = 1.0;
    return p;
  }
  const double q = mode.nbar / (mode.nbar + 1.0);
  p[0] = 1.0 / (mode.nbar + 1.0);
  for (int n = 1; n <= mode.n_cut; ++n) p[n] = p[n - 1] * q;
  return p;
}

RsbRabiTable::RsbRabiTable(double eta_, double omega0_, int n_cut, bool printed_index)
    : eta(eta_), omega0(omega0_), coeff(n_cut) {
  const double x = eta * eta;
  const std::vector<double> lag = laguerre_sequence(n_cut, 1, x);
  const double dw = std::exp(-0.5 * x);
  for (int n = 1; n <= n_cut; ++n) {
    const double l = printed_index ? lag[n] : lag[n - 1];
    coeff[n - 1] = dw * eta * l / std::sqrt(static_cast<double>(n));
  }
}

double RsbRabiTable::operator()(double nbar) const {
  if (nbar <= 0.0) return 0.0;
  const double q = nbar / (nbar + 1.0);
  double p = q / (nbar + 1.0);  // P(1)
  double sum = 0.0;
  for (double c : coeff) {
    sum += p * c;
    p *= q;
  }
  return omega0 * sum;
}

double thermal_rsb_rabi(double nbar, double eta, double omega0, bool printed_index) {
  if (nbar <= 0.0) return 0.0;
  const int n_cut = thermal_cutoff(nbar, 1e-10, 16, 512);
  return RsbRabiTable(eta, omega0, n_cut, printed_index)(nbar);
}

}  // namespace ioncool
