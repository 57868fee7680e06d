#include "scaling.hpp"

#include <cmath>
#include <stdexcept>

#include "errors.hpp"
#include "workpool.hpp"

namespace ioncool {

PowerAllocation optimal_power_allocation(const std::vector<double>& frequencies, double p0) {
  if (frequencies.empty())
    throw std::invalid_argument("optimal_power_allocation: empty frequency list");
  double inv_sum = 0.0;
  for (double w : frequencies) {
    if (!(w > 0)) throw std::invalid_argument("optimal_power_allocation: frequencies must be > 0");
    inv_sum += 1.0 / w;
  }
  PowerAllocation alloc;
  alloc.total = p0;
  alloc.powers.reserve(frequencies.size());
  for (double w : frequencies) alloc.powers.push_back(p0 / (w * inv_sum));
  return alloc;
}

double parallel_cooling_time(const std::vector<double>& frequencies, double t1) {
  double inv_sum = 0.0;
  for (double w : frequencies) inv_sum += 1.0 / w;
  return std::sqrt(frequencies.front() * inv_sum) * t1;
}

double sequential_cooling_time(const std::vector<double>& frequencies, double t1) {
  double s = 0.0;
  for (double w : frequencies) s += 1.0 / std::sqrt(w);
  return std::sqrt(frequencies.front()) * s * t1;
}

ScalingCurve scaling_curve(int n_max, const TrapConfig& cfg, Axis axis,
                           const ScalingOptions& opt) {
  if (n_max < 1 || n_max > 128)
    throw std::invalid_argument("scaling_curve: n_max must be in [1, 128]");

  const double omega_single = axis == Axis::axial ? cfg.omega_z : cfg.omega_x;
  const double t1 = opt.t1_ref * std::sqrt(opt.omega_ref / omega_single);

  std::vector<ScalingRow> rows(n_max);
  std::vector<char> unstable(n_max, 0);
  parallel_for(n_max, [&](std::size_t idx) {
    const int n = static_cast<int>(idx) + 1;
    TrapConfig c = cfg;
    c.n_ions = n;
    try {
      const ModeStructure ms = axis == Axis::axial ? axial_modes(c) : radial_modes(c);
      rows[idx] = {n, parallel_cooling_time(ms.frequencies, t1),
                   sequential_cooling_time(ms.frequencies, t1)};
    } catch (const InstabilityError&) {
      unstable[idx] = 1;
    }
  }, opt.threads);

  ScalingCurve curve;
  curve.t1 = t1;
  for (int idx = 0; idx < n_max; ++idx) {
    if (unstable[idx]) {
      curve.truncated = true;
      curve.truncated_at = idx + 1;
      break;
    }
    curve.rows.push_back(rows[idx]);
  }

  // least-squares fit T_parallel ~ a + b ln N
  const std::size_t m = curve.rows.size();
  if (m >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& r : curve.rows) {
      const double x = std::log(static_cast<double>(r.n_ions));
      sx += x;
      sy += r.t_parallel;
      sxx += x * x;
      sxy += x * r.t_parallel;
    }
    const double det = m * sxx - sx * sx;
    curve.parallel_fit.b = (m * sxy - sx * sy) / det;
    curve.parallel_fit.a = (sy - curve.parallel_fit.b * sx) / m;
    double ss_res = 0, ss_tot = 0, max_rel = 0;
    const double mean = sy / m;
    for (const auto& r : curve.rows) {
      const double fit = curve.parallel_fit.a +
                         curve.parallel_fit.b * std::log(static_cast<double>(r.n_ions));
      ss_res += (r.t_parallel - fit) * (r.t_parallel - fit);
      ss_tot += (r.t_parallel - mean) * (r.t_parallel - mean);
      max_rel = std::max(max_rel, std::abs(fit - r.t_parallel) / r.t_parallel);
    }
    curve.parallel_fit.r_squared = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
    curve.parallel_fit.max_rel_residual = max_rel;
  }
  return curve;
}

}  // namespace ioncool
