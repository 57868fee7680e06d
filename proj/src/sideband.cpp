#include "sideband.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "errors.hpp"
#include "specfun.hpp"
#include "workpool.hpp"

namespace ioncool {

using cplx = std::complex<double>;

double SpinPhononState::norm() const {
  double s = 0.0;
  for (const cplx& a : amp) s += std::norm(a);
  return std::sqrt(s);
}

SpinPhononState basis_state(int n_ions, int n_cut, unsigned spin_mask, int n_phonon) {
  SpinPhononState psi;
  psi.n_ions = n_ions;
  psi.n_cut = n_cut;
  psi.amp.assign((std::size_t(1) << n_ions) * (n_cut + 1), cplx(0, 0));
  psi.amp[spin_mask * (n_cut + 1) + n_phonon] = cplx(1, 0);
  return psi;
}

double sideband_coupling(Sideband sign, LdOrder order, double eta, int n_from) {
  const int n = n_from;
  if (sign == Sideband::red) {
    if (n < 1) return 0.0;
    if (order == LdOrder::third) {
      // third-order LD expansion of the first sideband, agrees with the
      // exact element through O(eta^4)
      return eta * std::sqrt(static_cast<double>(n)) * (1.0 - 0.5 * n * eta * eta);
    }
    return displacement_element_signed(n - 1, 1, eta);
  }
  // blue: n -> n+1
  if (order == LdOrder::third)
    return eta * std::sqrt(n + 1.0) * (1.0 - 0.5 * (n + 1) * eta * eta);
  return displacement_element_signed(n, 1, eta);
}

SidebandHamiltonian build_sideband_hamiltonian(const std::vector<double>& etas,
                                               double omega0, Sideband sign, LdOrder order,
                                               double delta, int n_cut) {
  const int n_ions = static_cast<int>(etas.size());
  if (n_ions < 1 || n_ions > 6 || n_cut < 0 || n_cut > 64)
    throw BudgetError("sideband Hamiltonian limited to N <= 6 ions, n_cut <= 64");

  SidebandHamiltonian h;
  h.n_ions = n_ions;
  h.n_cut = n_cut;
  h.sign = sign;
  h.order = order;
  h.etas = etas;
  h.omega0 = omega0;
  h.delta = delta;

  const int nph = n_cut + 1;
  const std::size_t dim = h.dim();
  h.row_ptr.reserve(dim + 1);
  h.row_ptr.push_back(0);

  // per-ion coupling tables g[i][n] for the transition out of phonon n
  std::vector<std::vector<double>> g(n_ions, std::vector<double>(nph, 0.0));
  for (int i = 0; i < n_ions; ++i)
    for (int n = 0; n < nph; ++n) g[i][n] = sideband_coupling(sign, order, etas[i], n);

  for (unsigned s = 0; s < (1u << n_ions); ++s) {
    const int ups = std::popcount(s);
    for (int n = 0; n < nph; ++n) {
      if (delta != 0.0 && ups > 0) {
        h.col.push_back(static_cast<int>(s) * nph + n);
        h.val.push_back(-delta * ups);
      }
      for (int i = 0; i < n_ions; ++i) {
        const unsigned flipped = s ^ (1u << i);
        if (!(s & (1u << i))) {
          // spin down at i: drive flips it up, phonon n -> n -/+ 1
          const int n2 = sign == Sideband::red ? n - 1 : n + 1;
          if (n2 < 0 || n2 > n_cut) continue;
          h.col.push_back(static_cast<int>(flipped) * nph + n2);
          h.val.push_back(0.5 * omega0 * g[i][n]);
        } else {
          // hermitian partner
          const int n2 = sign == Sideband::red ? n + 1 : n - 1;
          if (n2 < 0 || n2 > n_cut) continue;
          h.col.push_back(static_cast<int>(flipped) * nph + n2);
          h.val.push_back(0.5 * omega0 * g[i][n2]);
        }
      }
      h.row_ptr.push_back(static_cast<int>(h.col.size()));
    }
  }
  return h;
}

void SidebandHamiltonian::apply(const cplx* x, cplx* y) const {
  const std::size_t n = dim();
  for (std::size_t r = 0; r < n; ++r) {
    cplx acc(0, 0);
    for (int k = row_ptr[r]; k < row_ptr[r + 1]; ++k) acc += val[k] * x[col[k]];
    y[r] = acc;
  }
}

double SidebandHamiltonian::gershgorin_bound() const {
  const std::size_t n = dim();
  double worst = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    double s = 0.0;
    for (int k = row_ptr[r]; k < row_ptr[r + 1]; ++k) s += std::abs(val[k]);
    worst = std::max(worst, s);
  }
  return worst;
}

double SidebandHamiltonian::hermiticity_error() const {
  // dense check is fine at these sizes
  const std::size_t n = dim();
  double worst = 0.0;
  std::vector<double> dense(n * n, 0.0);
  for (std::size_t r = 0; r < n; ++r)
    for (int k = row_ptr[r]; k < row_ptr[r + 1]; ++k) dense[r * n + col[k]] += val[k];
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      worst = std::max(worst, std::abs(dense[i * n + j] - dense[j * n + i]));
  return worst;
}

namespace {

// RK4 on psi' = -i H psi with nsteps fixed steps, renormalizing each step.
void propagate(const SidebandHamiltonian& h, std::vector<cplx>& psi, double t, long nsteps) {
  const std::size_t dim = psi.size();
  std::vector<cplx> k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim);
  const double dt = t / nsteps;
  const cplx mi(0, -1);
  for (long s = 0; s < nsteps; ++s) {
    h.apply(psi.data(), k1.data());
    for (std::size_t i = 0; i < dim; ++i) tmp[i] = psi[i] + 0.5 * dt * mi * k1[i];
    h.apply(tmp.data(), k2.data());
    for (std::size_t i = 0; i < dim; ++i) tmp[i] = psi[i] + 0.5 * dt * mi * k2[i];
    h.apply(tmp.data(), k3.data());
    for (std::size_t i = 0; i < dim; ++i) tmp[i] = psi[i] + dt * mi * k3[i];
    h.apply(tmp.data(), k4.data());
    double nrm = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      psi[i] += dt / 6.0 * mi * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
      nrm += std::norm(psi[i]);
    }
    nrm = std::sqrt(nrm);
    if (nrm <= 0) throw NumericError("evolve_state: state collapsed to zero norm");
    for (std::size_t i = 0; i < dim; ++i) psi[i] /= nrm;
  }
}

}  // namespace

SpinPhononState evolve_state(const SidebandHamiltonian& h, const SpinPhononState& psi0,
                             double t) {
  if (psi0.dim() != h.dim())
    throw std::invalid_argument("evolve_state: state/Hamiltonian dimension mismatch");
  SpinPhononState out = psi0;
  if (t == 0.0) return out;

  const double wmax = h.gershgorin_bound();
  long nsteps = std::max<long>(1, static_cast<long>(std::ceil(t * std::max(wmax, 1e-300) / 0.1)));

  std::vector<cplx> coarse = psi0.amp;
  propagate(h, coarse, t, nsteps);
  for (int iter = 0; iter < 24; ++iter) {
    nsteps *= 2;
    std::vector<cplx> fine = psi0.amp;
    propagate(h, fine, t, nsteps);
    double diff = 0.0;
    for (std::size_t i = 0; i < fine.size(); ++i)
      diff = std::max(diff, std::abs(fine[i] - coarse[i]));
    coarse.swap(fine);
    if (diff < 1e-7) {
      out.amp = std::move(coarse);
      return out;
    }
  }
  throw NumericError("evolve_state: step-halving did not converge to 1e-7");
}

double brightness(const SpinPhononState& psi) {
  const int nph = psi.n_cut + 1;
  double s = 0.0;
  for (std::size_t idx = 0; idx < psi.amp.size(); ++idx) {
    const unsigned mask = static_cast<unsigned>(idx / nph);
    if (mask) s += std::popcount(mask) * std::norm(psi.amp[idx]);
  }
  return s / psi.n_ions;
}

namespace {

// thermal-averaged brightness of one sideband drive at each time in ts
std::vector<double> mixture_brightness(const SidebandHamiltonian& h,
                                       const std::vector<double>& weights,
                                       const std::vector<double>& ts, int threads) {
  std::vector<std::vector<double>> per_fock(weights.size());
  parallel_for(weights.size(), [&](std::size_t n) {
    std::vector<double> row(ts.size(), 0.0);
    if (weights[n] > 1e-14) {
      const SpinPhononState psi0 = basis_state(h.n_ions, h.n_cut, 0, static_cast<int>(n));
      for (std::size_t k = 0; k < ts.size(); ++k)
        row[k] = brightness(evolve_state(h, psi0, ts[k]));
    }
    per_fock[n] = std::move(row);
  }, threads);

  std::vector<double> avg(ts.size(), 0.0);
  for (std::size_t n = 0; n < weights.size(); ++n)
    for (std::size_t k = 0; k < ts.size(); ++k) avg[k] += weights[n] * per_fock[n][k];
  return avg;
}

}  // namespace

RatioCurve ratio_curve(const std::vector<double>& etas, double omega0,
                       const std::vector<double>& nbar_grid, const RatioOptions& opt) {
  if (nbar_grid.empty()) throw std::invalid_argument("ratio_curve: empty nbar grid");
  const int n_ions = static_cast<int>(etas.size());
  if (n_ions > 4) throw BudgetError("ratio_curve: exact thermal averaging limited to N <= 4");

  double nbar_max = 0.0;
  for (double nb : nbar_grid) nbar_max = std::max(nbar_max, nb);
  const int n_cut = opt.n_cut > 0
                        ? opt.n_cut
                        : std::min(64, std::max(16, static_cast<int>(std::ceil(8.0 * nbar_max))));

  const SidebandHamiltonian h_red =
      build_sideband_hamiltonian(etas, omega0, Sideband::red, opt.order, 0.0, n_cut);
  const SidebandHamiltonian h_blue =
      build_sideband_hamiltonian(etas, omega0, Sideband::blue, opt.order, 0.0, n_cut);

  RatioCurve curve;
  curve.n_ions = n_ions;
  curve.nbar_grid = nbar_grid;

  double probe = opt.probe_time;
  if (probe <= 0) {
    // probe at the BSB-brightness argmax for the central grid nbar
    double g0 = 0.0;
    for (double e : etas) g0 = std::max(g0, std::abs(sideband_coupling(Sideband::blue, opt.order, e, 0)));
    if (g0 <= 0) throw std::invalid_argument("ratio_curve: zero blue coupling");
    const double tmax = opt.time_max > 0 ? opt.time_max : 6.0 * kPi / (omega0 * g0);
    std::vector<double> ts(opt.time_points);
    for (int k = 0; k < opt.time_points; ++k) ts[k] = tmax * (k + 1.0) / opt.time_points;

    const double nbar_c = nbar_grid[nbar_grid.size() / 2];
    const std::vector<double> w =
        thermal_weights(ThermalMode{nbar_c, n_cut});
    const std::vector<double> ab = mixture_brightness(h_blue, w, ts, opt.threads);
    std::size_t imax = 0;
    for (std::size_t k = 1; k < ab.size(); ++k)
      if (ab[k] > ab[imax]) imax = k;
    probe = ts[imax];
  }
  curve.probe_time = probe;

  const std::vector<double> probe_vec{probe};
  curve.ratio.resize(nbar_grid.size());
  curve.a_red.resize(nbar_grid.size());
  curve.a_blue.resize(nbar_grid.size());
  for (std::size_t g = 0; g < nbar_grid.size(); ++g) {
    const std::vector<double> w = thermal_weights(ThermalMode{nbar_grid[g], n_cut});
    curve.a_red[g] = mixture_brightness(h_red, w, probe_vec, opt.threads)[0];
    curve.a_blue[g] = mixture_brightness(h_blue, w, probe_vec, opt.threads)[0];
    curve.ratio[g] = curve.a_blue[g] > 0 ? curve.a_red[g] / curve.a_blue[g] : 0.0;
  }

  // single best-fit alpha with nbar = alpha R/(1 - alpha R); exact 1 for one ion
  if (n_ions == 1) {
    curve.alpha = 1.0;
  } else {
    double best_alpha = 1.0, best_sse = -1.0;
    for (int k = 0; k <= 400; ++k) {
      const double alpha = 0.5 + 2.0 * k / 400.0;
      double sse = 0.0;
      bool ok = true;
      for (std::size_t g = 0; g < nbar_grid.size(); ++g) {
        const double ar = alpha * curve.ratio[g];
        if (ar >= 1.0) { ok = false; break; }
        const double nb = ar / (1.0 - ar);
        sse += (nb - nbar_grid[g]) * (nb - nbar_grid[g]);
      }
      if (ok && (best_sse < 0 || sse < best_sse)) {
        best_sse = sse;
        best_alpha = alpha;
      }
    }
    curve.alpha = best_alpha;
  }
  return curve;
}

NbarEstimate extract_nbar(double r_measured, const RatioCurve& curve) {
  NbarEstimate est;
  est.alpha = curve.alpha;
  const std::vector<double>& r = curve.ratio;
  const std::vector<double>& nb = curve.nbar_grid;
  if (r.size() < 2) throw std::invalid_argument("extract_nbar: curve needs >= 2 points");

  if (r_measured <= r.front()) {
    est.nbar = nb.front();
    est.lower = est.upper = nb.front();
    est.clamped = r_measured < r.front();
    return est;
  }
  if (r_measured >= r.back()) {
    est.nbar = nb.back();
    est.lower = nb.back();
    est.upper = nb.back();
    est.lower_bound_only = true;
    return est;
  }
  for (std::size_t i = 0; i + 1 < r.size(); ++i) {
    if (r_measured >= r[i] && r_measured <= r[i + 1]) {
      const double f = (r_measured - r[i]) / (r[i + 1] - r[i]);
      est.nbar = nb[i] + f * (nb[i + 1] - nb[i]);
      est.lower = nb[i];
      est.upper = nb[i + 1];
      return est;
    }
  }
  throw NumericError("extract_nbar: ratio curve is not monotone");
}

NbarEstimate upper_bound_nbar(double noise_amplitude, double bsb_amplitude,
                              const RatioCurve& curve) {
  if (noise_amplitude < 0 || bsb_amplitude <= 0)
    throw std::invalid_argument("upper_bound_nbar: amplitudes must be in range");
  const double r = 0.5 * noise_amplitude / bsb_amplitude;
  return extract_nbar(r, curve);
}

std::vector<SpectrumPoint> spectrum_scan(const ModeStructure& modes,
                                         const std::vector<double>& nbars, double omega0,
                                         double probe_time,
                                         const std::vector<double>& detuning_grid,
                                         const SpectrumOptions& opt) {
  const int n_ions = modes.n_ions;
  if (n_ions > 4) throw BudgetError("spectrum_scan: exact simulation limited to N <= 4");
  if (nbars.size() != modes.frequencies.size())
    throw std::invalid_argument("spectrum_scan: one nbar per mode required");

  std::vector<SpectrumPoint> out;
  const int n_modes = static_cast<int>(modes.frequencies.size());
  for (int m = 0; m < n_modes; ++m) {
    std::vector<double> etas(n_ions);
    for (int i = 0; i < n_ions; ++i) etas[i] = modes.eta(i, m);
    const int n_cut = opt.n_cut > 0
                          ? opt.n_cut
                          : std::min(64, std::max(16, static_cast<int>(std::ceil(8.0 * std::max(nbars[m], 0.5)))));
    const std::vector<double> w = thermal_weights(ThermalMode{nbars[m], n_cut});

    for (Sideband sb : {Sideband::red, Sideband::blue}) {
      std::vector<double> exc(detuning_grid.size(), 0.0);
      parallel_for(detuning_grid.size(), [&](std::size_t k) {
        const SidebandHamiltonian h = build_sideband_hamiltonian(
            etas, omega0, sb, opt.order, detuning_grid[k], n_cut);
        std::vector<double> per(w.size(), 0.0);
        for (std::size_t n = 0; n < w.size(); ++n) {
          if (w[n] <= 1e-14) continue;
          const SpinPhononState psi0 = basis_state(n_ions, n_cut, 0, static_cast<int>(n));
          per[n] = brightness(evolve_state(h, psi0, probe_time));
        }
        double s = 0.0;
        for (std::size_t n = 0; n < w.size(); ++n) s += w[n] * per[n];
        exc[k] = s;
      }, opt.threads);

      for (std::size_t k = 0; k < exc.size(); ++k) {
        SpectrumPoint pt;
        pt.mode = m;
        pt.sideband = sb == Sideband::red ? "red" : "blue";
        pt.detuning = detuning_grid[k];
        pt.excitation = exc[k];
        pt.normalized = 0.0;  // filled after both scans
        pt.probe_time = probe_time;
        out.push_back(pt);
      }
    }

    // normalize this mode's red and blue rows by the blue peak
    double blue_peak = 0.0;
    for (const auto& pt : out)
      if (pt.mode == m && pt.sideband == "blue") blue_peak = std::max(blue_peak, pt.excitation);
    if (blue_peak > 0)
      for (auto& pt : out)
        if (pt.mode == m) pt.normalized = pt.excitation / blue_peak;
  }
  return out;
}

}  // namespace ioncool
