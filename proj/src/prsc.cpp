#include "prsc.hpp"

#include <cmath>
#include <stdexcept>

#include "specfun.hpp"

namespace ioncool {

double FockPopulations::nbar() const {
  double s = 0.0, w = 0.0;
  for (size_t n = 0; n < p.size(); ++n) {
    s += n * p[n];
    w += p[n];
  }
  return w > 0 ? s / w : 0.0;
}

double FockPopulations::total() const {
  double w = 0.0;
  for (double x : p) w += x;
  return w;
}

FockPopulations thermal_populations(double nbar0, int n_cut) {
  ThermalMode m{nbar0, n_cut};
  return FockPopulations{thermal_weights(m)};
}

namespace {

// |<n|D|n+1>| for n = 0..n_cut-1, in units of omega0
std::vector<double> rsb_rates(int n_cut, double eta, double omega0) {
  const double x = eta * eta;
  const std::vector<double> lag = laguerre_sequence(n_cut, 1, x);
  const double dw = std::exp(-0.5 * x);
  std::vector<double> om(n_cut);
  for (int n = 0; n < n_cut; ++n)
    om[n] = omega0 * dw * std::abs(eta) * std::abs(lag[n]) / std::sqrt(n + 1.0);
  return om;
}

}  // namespace

FockPopulations pulse_update(const FockPopulations& pop, double t, double eta, double omega0) {
  if (t < 0) throw std::invalid_argument("pulse_update: t must be >= 0");
  const int n_cut = static_cast<int>(pop.p.size()) - 1;
  const std::vector<double> om = rsb_rates(n_cut, eta, omega0);
  const std::vector<double>& p = pop.p;
  std::vector<double> out(n_cut + 1);

  // P'(n) = 1/2 P(n)(1+cos O_{n-1,n} t) + 1/2 P(n+1)(1-cos O_{n,n+1} t)
  out[0] = p[0] + (n_cut >= 1 ? 0.5 * p[1] * (1.0 - std::cos(om[0] * t)) : 0.0);
  for (int n = 1; n <= n_cut; ++n) {
    double v = 0.5 * p[n] * (1.0 + std::cos(om[n - 1] * t));
    if (n < n_cut) v += 0.5 * p[n + 1] * (1.0 - std::cos(om[n] * t));
    out[n] = v;
  }
  return FockPopulations{std::move(out)};
}

std::vector<double> prsc_trajectory(double nbar0, double eta, double omega0,
                                    double t_pulse, int n_pulses) {
  const int n_cut = thermal_cutoff(nbar0, 1e-8, 32, 512);
  FockPopulations pop = thermal_populations(nbar0, n_cut);
  std::vector<double> nbars;
  nbars.reserve(n_pulses + 1);
  nbars.push_back(pop.nbar());
  for (int i = 0; i < n_pulses; ++i) {
    pop = pulse_update(pop, t_pulse, eta, omega0);
    nbars.push_back(pop.nbar());
  }
  return nbars;
}

double optimize_pulse_length(double nbar0, double eta, double omega0, int n_pulses,
                             double t_min, double t_max, int grid) {
  if (grid < 1) throw std::invalid_argument("optimize_pulse_length: grid must be >= 1");
  const int n_cut = thermal_cutoff(nbar0, 1e-8, 32, 512);
  const FockPopulations initial = thermal_populations(nbar0, n_cut);
  double best_t = t_min;
  double best_nbar = -1.0;
  for (int k = 0; k <= grid; ++k) {
    const double t = t_min + (t_max - t_min) * k / grid;
    FockPopulations pop = initial;
    for (int i = 0; i < n_pulses; ++i) pop = pulse_update(pop, t, eta, omega0);
    const double nb = pop.nbar();
    if (best_nbar < 0 || nb < best_nbar - 1e-15) {
      best_nbar = nb;
      best_t = t;
    }
  }
  return best_t;
}

}  // namespace ioncool
