#pragma once

#include <vector>

#include "chain.hpp"

namespace ioncool {

struct PowerAllocation {
  std::vector<double> powers;
  double total = 0.0;
};

// Maximin-optimal laser power split across modes: P_m proportional to
// 1/omega_m, normalized to p0 (equalizes omega_m P_m).
PowerAllocation optimal_power_allocation(const std::vector<double>& frequencies, double p0);

// Parallel (all modes at once, optimal split): T = sqrt(w1 sum_m 1/w_m) T1.
// frequencies must be ascending; w1 is the first entry.
double parallel_cooling_time(const std::vector<double>& frequencies, double t1);

// Sequential (one mode at a time): T = sqrt(w1) sum_m 1/sqrt(w_m) T1.
double sequential_cooling_time(const std::vector<double>& frequencies, double t1);

struct ScalingRow {
  int n_ions = 0;
  double t_parallel = 0.0;
  double t_sequential = 0.0;
};

struct LogFit {
  double a = 0.0, b = 0.0;       // T ~ a + b ln N
  double r_squared = 0.0;
  double max_rel_residual = 0.0;
};

struct ScalingCurve {
  std::vector<ScalingRow> rows;
  bool truncated = false;        // zigzag instability hit before n_max
  int truncated_at = 0;
  LogFit parallel_fit;
  double t1 = 0.0;               // baseline actually used (after rescaling)
};

struct ScalingOptions {
  // single-ion baseline: t1_ref at reference frequency omega_ref; the curve
  // baseline is rescaled to the curve's own single-ion frequency by the
  // T1 ~ 1/sqrt(omega) law.
  double t1_ref = 200e-6;
  double omega_ref = kTwoPi * 735e3;
  int threads = 0;  // 0 = hardware concurrency
};

ScalingCurve scaling_curve(int n_max, const TrapConfig& cfg, Axis axis,
                           const ScalingOptions& opt = {});

}  // namespace ioncool
