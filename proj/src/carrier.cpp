#include "carrier.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "errors.hpp"
#include "rng.hpp"
#include "specfun.hpp"
#include "workpool.hpp"

namespace ioncool {

FlopTrace single_ion_carrier(double nbar, double eta, double omega0,
                             const std::vector<double>& times) {
  const int n_cut = thermal_cutoff(nbar, 1e-8, 0, 512);
  const std::vector<double> p = thermal_weights(ThermalMode{nbar, n_cut});
  const std::vector<double> lag = laguerre_sequence(n_cut, 0, eta * eta);
  const double dw = std::exp(-0.5 * eta * eta);

  FlopTrace tr;
  tr.times = times;
  tr.excitation.resize(times.size());
  for (std::size_t k = 0; k < times.size(); ++k) {
    double s = 0.0;
    for (int n = 0; n <= n_cut; ++n) s += p[n] * std::cos(omega0 * dw * lag[n] * times[k]);
    tr.excitation[k] = 0.5 * (1.0 - s);
  }
  return tr;
}

void CarrierModel::validate() const {
  const std::size_t n_modes = modes.frequencies.size();
  if (nbars.size() != n_modes)
    throw std::invalid_argument("CarrierModel: one nbar per mode required");
  for (double nb : nbars)
    if (nb < 0) throw std::invalid_argument("CarrierModel: nbars must be >= 0");
  if (omega0_per_ion.size() != static_cast<std::size_t>(modes.n_ions))
    throw std::invalid_argument("CarrierModel: one omega0 per ion required");
}

std::vector<double> beam_profile_weights(const TrapConfig& cfg, double omega0,
                                         double waist_z) {
  const std::vector<double> u = equilibrium_positions(cfg.n_ions);
  const double ell = cfg.length_scale();
  std::vector<double> w(cfg.n_ions);
  for (int i = 0; i < cfg.n_ions; ++i) {
    const double z = u[i] * ell;
    w[i] = waist_z > 0 ? omega0 * std::exp(-2.0 * z * z / (waist_z * waist_z)) : omega0;
  }
  return w;
}

double carrier_rabi_ground(const ModeStructure& modes, int ion, double omega0) {
  if (ion < 0 || ion >= modes.n_ions)
    throw std::invalid_argument("carrier_rabi_ground: ion index out of range");
  double s = 0.0;
  for (std::size_t m = 0; m < modes.frequencies.size(); ++m) {
    const double eta = modes.eta(ion, static_cast<int>(m));
    s += eta * eta;
  }
  return omega0 * std::exp(-0.5 * s);
}

namespace {

struct ModeTables {
  std::vector<std::vector<double>> prob;  // [mode][n]
  std::vector<std::vector<double>> dwlag; // [mode][n] = e^{-eta^2/2} L_n(eta^2)
  long lattice = 1;
};

ModeTables make_tables(const CarrierModel& model, int ion, double tail_tol, long budget) {
  const int n_modes = static_cast<int>(model.modes.frequencies.size());
  ModeTables t;
  t.prob.resize(n_modes);
  t.dwlag.resize(n_modes);
  for (int m = 0; m < n_modes; ++m) {
    const int n_cut = thermal_cutoff(model.nbars[m], tail_tol, 0, 512);
    t.prob[m] = thermal_weights(ThermalMode{model.nbars[m], n_cut});
    const double eta = model.modes.eta(ion, m);
    const std::vector<double> lag = laguerre_sequence(n_cut, 0, eta * eta);
    const double dw = std::exp(-0.5 * eta * eta);
    t.dwlag[m].resize(n_cut + 1);
    for (int n = 0; n <= n_cut; ++n) t.dwlag[m][n] = dw * lag[n];
    if (budget > 0) {
      t.lattice *= (n_cut + 1);
      if (t.lattice > budget)
        throw BudgetError(
            "multimode_carrier_exact: joint Fock lattice exceeds the enumeration "
            "budget; use multimode_carrier_mc");
    }
  }
  return t;
}

void enumerate_configs(const ModeTables& t, int mode, double prob, double f, double omega_i,
                       const std::vector<double>& times, std::vector<double>& cos_sum) {
  if (prob < 1e-16) return;
  if (mode == static_cast<int>(t.prob.size())) {
    for (std::size_t k = 0; k < times.size(); ++k)
      cos_sum[k] += prob * std::cos(omega_i * f * times[k]);
    return;
  }
  for (std::size_t n = 0; n < t.prob[mode].size(); ++n)
    enumerate_configs(t, mode + 1, prob * t.prob[mode][n], f * t.dwlag[mode][n], omega_i,
                      times, cos_sum);
}

}  // namespace

FlopTrace multimode_carrier_exact(const CarrierModel& model, int ion,
                                  const std::vector<double>& times,
                                  const EnumerationOptions& opt) {
  model.validate();
  const ModeTables t = make_tables(model, ion, opt.tail_tol, opt.budget);
  std::vector<double> cos_sum(times.size(), 0.0);
  enumerate_configs(t, 0, 1.0, 1.0, model.omega0_per_ion[ion], times, cos_sum);

  FlopTrace tr;
  tr.times = times;
  tr.excitation.resize(times.size());
  for (std::size_t k = 0; k < times.size(); ++k)
    tr.excitation[k] = 0.5 * (1.0 - cos_sum[k]);
  return tr;
}

FlopTrace multimode_carrier_mc(const CarrierModel& model, int ion,
                               const std::vector<double>& times, const McOptions& opt) {
  model.validate();
  if (opt.n_samples < 1000)
    throw std::invalid_argument("multimode_carrier_mc: n_samples must be >= 1000");
  const ModeTables t = make_tables(model, ion, 1e-10, 0);
  const int n_modes = static_cast<int>(t.prob.size());
  const double omega_i = model.omega0_per_ion[ion];
  const CounterRng rng(opt.seed);

  // sample one Fock index of mode m from its geometric law
  const auto draw = [&](int m, std::uint64_t stream, std::uint64_t counter) -> int {
    const double nbar = model.nbars[m];
    if (nbar <= 0) return 0;
    const double q = nbar / (nbar + 1.0);
    const double u = rng.uniform(stream, counter);
    const int n = static_cast<int>(std::floor(std::log1p(-u) / std::log(q)));
    return std::min<int>(n, static_cast<int>(t.prob[m].size()) - 1);
  };

  // stratify over the dominant thermal mode when asked
  int strat_mode = -1;
  if (opt.stratify_com && n_modes > 0) {
    int best = 0;
    for (int m = 1; m < n_modes; ++m)
      if (model.nbars[m] > model.nbars[best]) best = m;
    if (model.nbars[best] > 0) strat_mode = best;
  }

  FlopTrace tr;
  tr.times = times;
  tr.excitation.assign(times.size(), 0.0);
  tr.std_error.assign(times.size(), 0.0);

  const auto sample_rest = [&](std::uint64_t stream, std::vector<double>& f_of_t_dest,
                               double fixed_factor) {
    double f = fixed_factor;
    for (int m = 0; m < n_modes; ++m) {
      if (m == strat_mode) continue;
      f *= t.dwlag[m][draw(m, stream, static_cast<std::uint64_t>(m))];
    }
    for (std::size_t k = 0; k < times.size(); ++k)
      f_of_t_dest[k] = std::cos(omega_i * f * times[k]);
  };

  if (strat_mode < 0) {
    // plain iid sampling
    std::vector<double> sum(times.size(), 0.0), sumsq(times.size(), 0.0);
    std::vector<std::vector<double>> rows(opt.n_samples);
    parallel_for(opt.n_samples, [&](std::size_t s) {
      std::vector<double> row(times.size());
      sample_rest(s, row, 1.0);
      rows[s] = std::move(row);
    }, opt.threads);
    for (int s = 0; s < opt.n_samples; ++s)
      for (std::size_t k = 0; k < times.size(); ++k) {
        sum[k] += rows[s][k];
        sumsq[k] += rows[s][k] * rows[s][k];
      }
    for (std::size_t k = 0; k < times.size(); ++k) {
      const double mean = sum[k] / opt.n_samples;
      const double var =
          std::max(0.0, (sumsq[k] - opt.n_samples * mean * mean) / (opt.n_samples - 1.0));
      tr.excitation[k] = 0.5 * (1.0 - mean);
      tr.std_error[k] = 0.5 * std::sqrt(var / opt.n_samples);
    }
    return tr;
  }

  // stratified: exact weights over the dominant mode, iid inner samples
  const std::vector<double>& w_strat = t.prob[strat_mode];
  const int n_strata = static_cast<int>(w_strat.size());
  std::vector<int> k_per(n_strata);
  for (int s = 0; s < n_strata; ++s)
    k_per[s] = std::max(2, static_cast<int>(std::lround(opt.n_samples * w_strat[s])));

  std::vector<std::vector<double>> mean_s(n_strata), var_s(n_strata);
  parallel_for(n_strata, [&](std::size_t s) {
    std::vector<double> sum(times.size(), 0.0), sumsq(times.size(), 0.0), row(times.size());
    for (int k = 0; k < k_per[s]; ++k) {
      const std::uint64_t stream = (static_cast<std::uint64_t>(s) << 32) | k;
      sample_rest(stream, row, t.dwlag[strat_mode][s]);
      for (std::size_t j = 0; j < times.size(); ++j) {
        sum[j] += row[j];
        sumsq[j] += row[j] * row[j];
      }
    }
    mean_s[s].resize(times.size());
    var_s[s].resize(times.size());
    for (std::size_t j = 0; j < times.size(); ++j) {
      const double mean = sum[j] / k_per[s];
      mean_s[s][j] = mean;
      var_s[s][j] =
          std::max(0.0, (sumsq[j] - k_per[s] * mean * mean) / (k_per[s] - 1.0));
    }
  }, opt.threads);

  for (std::size_t j = 0; j < times.size(); ++j) {
    double mean = 0.0, var = 0.0;
    for (int s = 0; s < n_strata; ++s) {
      mean += w_strat[s] * mean_s[s][j];
      var += w_strat[s] * w_strat[s] * var_s[s][j] / k_per[s];
    }
    tr.excitation[j] = 0.5 * (1.0 - mean);
    tr.std_error[j] = 0.5 * std::sqrt(var);
  }
  return tr;
}

std::vector<double> exponential_prefit(const FlopTrace& trace) {
  const std::vector<double>& ts = trace.times;
  const std::vector<double>& y = trace.excitation;
  const std::size_t n = ts.size();
  const double t_end = ts.back() > 0 ? ts.back() : 1.0;

  // frequency scale from the first maximum (half period of the carrier)
  std::size_t imax = 0;
  for (std::size_t k = 1; k < n; ++k)
    if (y[k] > y[imax]) imax = k;
  double w_est = imax > 0 && ts[imax] > 0 ? kPi / ts[imax] : kPi / t_end;

  const auto sse_of = [&](double w, double g) {
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double m = 0.5 * (1.0 - std::exp(-g * ts[k]) * std::cos(w * ts[k]));
      s += (m - y[k]) * (m - y[k]);
    }
    return s;
  };

  double best_w = w_est, best_g = 0.0, best = sse_of(w_est, 0.0);
  for (int pass = 0; pass < 2; ++pass) {
    const double span = pass == 0 ? 0.5 : 0.05;
    const double gmax = pass == 0 ? 5.0 / t_end : std::max(best_g * 2.0, 0.5 / t_end);
    const double w0 = best_w;
    for (int iw = -50; iw <= 50; ++iw) {
      const double w = w0 * (1.0 + span * iw / 50.0);
      for (int ig = 0; ig <= 50; ++ig) {
        const double g = gmax * ig / 50.0;
        const double s = sse_of(w, g);
        if (s < best) {
          best = s;
          best_w = w;
          best_g = g;
        }
      }
    }
  }
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k)
    out[k] = 0.5 * (1.0 - std::exp(-best_g * ts[k]) * std::cos(best_w * ts[k]));
  return out;
}

ComFitResult fit_com_nbar(const std::vector<FlopTrace>& traces, const CarrierModel& model,
                          const ComFitOptions& opt) {
  model.validate();
  if (traces.empty()) throw std::invalid_argument("fit_com_nbar: at least one trace required");
  if (traces.size() != static_cast<std::size_t>(model.modes.n_ions))
    throw std::invalid_argument("fit_com_nbar: one trace per ion required");

  // COM mode of the template: the mode whose eigenvector is uniform, i.e.
  // the lowest axial mode
  const int com = 0;

  std::vector<std::vector<double>> target(traces.size());
  for (std::size_t i = 0; i < traces.size(); ++i)
    target[i] = opt.prefit_exponential ? exponential_prefit(traces[i]) : traces[i].excitation;

  const int n_grid = static_cast<int>(std::floor(opt.nbar_max / opt.nbar_step + 0.5)) + 1;
  std::vector<double> sse(n_grid, 0.0);
  parallel_for(n_grid, [&](std::size_t g) {
    CarrierModel m = model;
    std::fill(m.nbars.begin(), m.nbars.end(), 0.0);
    m.nbars[com] = g * opt.nbar_step;
    double s = 0.0;
    for (std::size_t i = 0; i < traces.size(); ++i) {
      const FlopTrace ft = multimode_carrier_exact(m, static_cast<int>(i), traces[i].times);
      for (std::size_t k = 0; k < ft.excitation.size(); ++k) {
        const double d = ft.excitation[k] - target[i][k];
        s += d * d;
      }
    }
    sse[g] = s;
  });

  int gmin = 0;
  for (int g = 1; g < n_grid; ++g)
    if (sse[g] < sse[gmin]) gmin = g;

  ComFitResult res;
  res.nbar = gmin * opt.nbar_step;
  res.sse = sse[gmin];

  // curvature-based interval from the discrete second difference
  long dof = 0;
  for (const auto& tr : traces) dof += static_cast<long>(tr.excitation.size());
  dof = std::max<long>(1, dof - 1);
  if (gmin > 0 && gmin < n_grid - 1) {
    const double d2 = (sse[gmin - 1] - 2.0 * sse[gmin] + sse[gmin + 1]) /
                      (opt.nbar_step * opt.nbar_step);
    if (d2 > 1e-30) {
      const double sigma2 = res.sse / dof;
      res.uncertainty = std::sqrt(2.0 * sigma2 / d2);
    } else {
      res.flat = true;
    }
  } else {
    const int g2 = gmin == 0 ? 1 : n_grid - 2;
    res.flat = std::abs(sse[g2] - sse[gmin]) < 1e-12 * (1.0 + sse[gmin]);
    if (!res.flat) {
      // one-sided curvature estimate at the boundary
      const double d1 = std::abs(sse[g2] - sse[gmin]) / opt.nbar_step;
      res.uncertainty = d1 > 0 ? res.sse / std::max(dof, 1L) / d1 : opt.nbar_step;
    }
  }
  return res;
}

}  // namespace ioncool
