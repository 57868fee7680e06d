#include "crsc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "errors.hpp"
#include "specfun.hpp"

namespace ioncool {

namespace {

using cplx = std::complex<double>;

inline Mat4 zero4() {
  Mat4 m;
  m.fill(cplx(0.0, 0.0));
  return m;
}

inline void axpy(Mat4& y, double a, const Mat4& x) {
  for (int i = 0; i < 16; ++i) y[i] += a * x[i];
}

}  // namespace

void FourLevelParams::validate() const {
  const double s = branching[0] + branching[1] + branching[2];
  if (std::abs(s - 1.0) > 1e-12)
    throw std::invalid_argument("branching fractions must sum to 1");
  if (!(gamma > 0)) throw std::invalid_argument("gamma must be > 0");
}

Mat4 build_hamiltonian(const FourLevelParams& p) {
  Mat4 h = zero4();
  h[0 * 4 + 1] = h[1 * 4 + 0] = 0.5 * p.omega12;
  h[1 * 4 + 3] = h[3 * 4 + 1] = 0.5 * p.omega24;
  h[2 * 4 + 3] = h[3 * 4 + 2] = 0.5 * p.omega34;
  h[2 * 4 + 2] = -p.delta;
  return h;
}

Mat4 lindblad_rhs(const Mat4& rho, const FourLevelParams& p) {
  const Mat4 h = build_hamiltonian(p);
  Mat4 d = zero4();
  // -i (H rho - rho H)
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      cplx s(0.0, 0.0);
      for (int k = 0; k < 4; ++k)
        s += h[i * 4 + k] * rho[k * 4 + j] - rho[i * 4 + k] * h[k * 4 + j];
      d[i * 4 + j] = cplx(0.0, -1.0) * s;
    }
  // collapse operators C_m = sqrt(b_m gamma) |m><4|, m = 1..3:
  // feeding terms b_m gamma rho44 |m><m|, drain -gamma/2 on row/col 4
  const double rho44 = rho[3 * 4 + 3].real();
  for (int m = 0; m < 3; ++m) d[m * 4 + m] += p.branching[m] * p.gamma * rho44;
  for (int k = 0; k < 4; ++k) {
    d[3 * 4 + k] -= 0.5 * p.gamma * rho[3 * 4 + k];
    d[k * 4 + 3] -= 0.5 * p.gamma * rho[k * 4 + 3];
  }
  return d;
}

double stable_step(const FourLevelParams& p) {
  const double wmax = std::max({p.gamma, p.omega12, p.omega24, p.omega34, std::abs(p.delta)});
  return 0.05 / wmax;
}

Mat4 ground_state_rho() {
  Mat4 m = zero4();
  m[0] = cplx(1.0, 0.0);
  return m;
}

double trace_error(const Mat4& rho) {
  cplx tr(0.0, 0.0);
  for (int i = 0; i < 4; ++i) tr += rho[i * 4 + i];
  return std::abs(tr - cplx(1.0, 0.0));
}

double hermiticity_error(const Mat4& rho) {
  double worst = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      worst = std::max(worst, std::abs(rho[i * 4 + j] - std::conj(rho[j * 4 + i])));
  return worst;
}

namespace {

void rk4_step(Mat4& rho, const FourLevelParams& p, double dt) {
  const Mat4 k1 = lindblad_rhs(rho, p);
  Mat4 tmp = rho;
  axpy(tmp, 0.5 * dt, k1);
  const Mat4 k2 = lindblad_rhs(tmp, p);
  tmp = rho;
  axpy(tmp, 0.5 * dt, k2);
  const Mat4 k3 = lindblad_rhs(tmp, p);
  tmp = rho;
  axpy(tmp, dt, k3);
  const Mat4 k4 = lindblad_rhs(tmp, p);
  for (int i = 0; i < 16; ++i)
    rho[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

}  // namespace

Mat4 evolve(const Mat4& rho0, const FourLevelParams& p, double t, double dt) {
  p.validate();
  if (t < 0) throw std::invalid_argument("evolve: t must be >= 0");
  if (dt <= 0) dt = stable_step(p);
  Mat4 rho = rho0;
  const long steps = static_cast<long>(std::ceil(t / dt));
  const double h = steps > 0 ? t / steps : 0.0;
  for (long s = 0; s < steps; ++s) rk4_step(rho, p, h);
  if (trace_error(rho) > 1e-8 || hermiticity_error(rho) > 1e-9)
    throw NumericError("evolve: density-matrix invariants violated at dt=" +
                       std::to_string(dt));
  return rho;
}

CoolingTrajectory cooling_trajectory(double nbar0, double eta, double omega0,
                                     double duration, const CoolingOptions& opt) {
  if (!(nbar0 > 0)) throw std::invalid_argument("cooling_trajectory: nbar0 must be > 0");
  FourLevelParams p;
  p.omega24 *= opt.pump_scale;
  p.omega34 *= opt.pump_scale;
  p.validate();

  const int n_cut = thermal_cutoff(nbar0 * 2.0, 1e-10, 32, 512);
  const RsbRabiTable rabi(eta, omega0, n_cut, opt.printed_rsb_index);

  // Eq-level rate: one completed optical-pumping cycle (decay into |1>)
  // removes one phonon.
  double rate = p.branching[0] * p.gamma;
  if (opt.printed_third_factor) rate /= 3.0;

  double dt = opt.dt;
  if (dt <= 0) {
    FourLevelParams pmax = p;
    pmax.omega12 = omega0;  // bound for the nbar-dependent coupling
    dt = stable_step(pmax);
  }

  const long steps = std::max<long>(1, static_cast<long>(std::ceil(duration / dt)));
  const double h = duration / steps;
  const long stride = std::max<long>(1, steps / std::max(1, opt.samples));

  Mat4 rho = ground_state_rho();
  double nbar = nbar0;

  CoolingTrajectory traj;
  traj.times.reserve(steps / stride + 2);
  traj.times.push_back(0.0);
  traj.nbar.push_back(nbar0);
  traj.rho44.push_back(0.0);

  Mat4 tmp;
  const auto rhs = [&](const Mat4& r, double nb, Mat4& dr, double& dn) {
    FourLevelParams pp = p;
    pp.omega12 = rabi(nb);
    dr = lindblad_rhs(r, pp);
    dn = -rate * r[3 * 4 + 3].real();
  };

  Mat4 k1, k2, k3, k4;
  double n1, n2, n3, n4;
  for (long s = 0; s < steps; ++s) {
    rhs(rho, nbar, k1, n1);
    tmp = rho;
    axpy(tmp, 0.5 * h, k1);
    rhs(tmp, std::max(nbar + 0.5 * h * n1, 0.0), k2, n2);
    tmp = rho;
    axpy(tmp, 0.5 * h, k2);
    rhs(tmp, std::max(nbar + 0.5 * h * n2, 0.0), k3, n3);
    tmp = rho;
    axpy(tmp, h, k3);
    rhs(tmp, std::max(nbar + h * n3, 0.0), k4, n4);
    for (int i = 0; i < 16; ++i)
      rho[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    nbar = std::max(nbar + h / 6.0 * (n1 + 2.0 * n2 + 2.0 * n3 + n4), 0.0);

    if ((s + 1) % stride == 0 || s + 1 == steps) {
      traj.times.push_back((s + 1) * h);
      traj.nbar.push_back(nbar);
      traj.rho44.push_back(rho[3 * 4 + 3].real());
    }
  }
  if (trace_error(rho) > 1e-8 || hermiticity_error(rho) > 1e-9)
    throw NumericError("cooling_trajectory: density-matrix invariants violated");
  return traj;
}

double CoolingTrajectory::time_to(double target) const {
  for (size_t i = 0; i < nbar.size(); ++i)
    if (nbar[i] <= target) return times[i];
  return -1.0;
}

}  // namespace ioncool
