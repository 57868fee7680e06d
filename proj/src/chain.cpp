#include "chain.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "errors.hpp"
#include "jacobi.hpp"

namespace ioncool {

void IonSpecies::validate() const {
  if (!(mass > 0) || !(natural_linewidth > 0) || !(raman_wavelength > 0))
    throw std::invalid_argument("IonSpecies fields must be strictly positive");
}

IonSpecies be9() {
  IonSpecies s;
  s.mass = 9.0121831 * kAmu;
  s.natural_linewidth = kTwoPi * 19.4e6;
  s.raman_wavelength = 313e-9;
  return s;
}

double default_delta_k(double raman_wavelength) {
  return std::sqrt(2.0) * kTwoPi / raman_wavelength;
}

void TrapConfig::validate() const {
  species.validate();
  if (n_ions < 1 || n_ions > 64)
    throw std::invalid_argument("n_ions must be in [1, 64]");
  if (!(omega_z > 0)) throw std::invalid_argument("omega_z must be > 0");
  if (!(omega_x > 0)) throw std::invalid_argument("omega_x must be > 0");
  if (!(delta_k > 0)) throw std::invalid_argument("delta_k must be > 0");
}

double TrapConfig::length_scale() const {
  const double ke2 = kCoulomb * kElementaryCharge * kElementaryCharge;
  return std::cbrt(ke2 / (species.mass * omega_z * omega_z));
}

double ModeStructure::eta_single_photon(int ion, int mode) const {
  return eta(ion, mode) / std::sqrt(2.0);
}

double force_balance_residual(const std::vector<double>& u) {
  const int n = static_cast<int>(u.size());
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    double f = u[i];
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      const double d = u[i] - u[j];
      f -= 1.0 / (d * std::abs(d));
    }
    worst = std::max(worst, std::abs(f));
  }
  return worst;
}

std::vector<double> equilibrium_positions(int n_ions) {
  if (n_ions < 1 || n_ions > 64)
    throw std::invalid_argument("equilibrium_positions: n_ions must be in [1, 64]");
  if (n_ions == 1) return {0.0};

  const int n = n_ions;
  // quasi-uniform spacing ansatz as the starting point
  std::vector<double> u(n);
  const double spacing = 2.018 / std::pow(n, 0.559);
  for (int i = 0; i < n; ++i) u[i] = (i - 0.5 * (n - 1)) * spacing;

  std::vector<double> f(n), jac(n * n), du(n);
  const double tol = 1e-12;
  const int max_iter = 100;
  double worst = 0.0;
  for (int iter = 0; iter < max_iter; ++iter) {
    worst = 0.0;
    for (int i = 0; i < n; ++i) {
      double fi = u[i];
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        const double d = u[i] - u[j];
        fi -= 1.0 / (d * std::abs(d));
      }
      f[i] = fi;
      worst = std::max(worst, std::abs(fi));
    }
    if (worst < tol) break;

    for (int i = 0; i < n; ++i) {
      double diag = 1.0;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        const double d = std::abs(u[i] - u[j]);
        const double c = 2.0 / (d * d * d);
        diag += c;
        jac[i * n + j] = -c;
      }
      jac[i * n + i] = diag;
    }

    // Gaussian elimination with partial pivoting on the (SPD-like) Jacobian
    std::vector<double> a = jac;
    du = f;
    for (int c = 0; c < n; ++c) {
      int piv = c;
      for (int r = c + 1; r < n; ++r)
        if (std::abs(a[r * n + c]) > std::abs(a[piv * n + c])) piv = r;
      if (std::abs(a[piv * n + c]) < 1e-300)
        throw SolverError("equilibrium_positions: singular Jacobian");
      if (piv != c) {
        for (int k = c; k < n; ++k) std::swap(a[c * n + k], a[piv * n + k]);
        std::swap(du[c], du[piv]);
      }
      for (int r = c + 1; r < n; ++r) {
        const double m = a[r * n + c] / a[c * n + c];
        for (int k = c; k < n; ++k) a[r * n + k] -= m * a[c * n + k];
        du[r] -= m * du[c];
      }
    }
    for (int r = n - 1; r >= 0; --r) {
      double s = du[r];
      for (int k = r + 1; k < n; ++k) s -= a[r * n + k] * du[k];
      du[r] = s / a[r * n + r];
    }

    // damped Newton: halve until the step does not reorder ions
    double lambda = 1.0;
    for (int h = 0; h < 30; ++h) {
      bool ordered = true;
      for (int i = 0; i + 1 < n; ++i)
        if (u[i] - lambda * du[i] >= u[i + 1] - lambda * du[i + 1]) ordered = false;
      if (ordered) break;
      lambda *= 0.5;
    }
    for (int i = 0; i < n; ++i) u[i] -= lambda * du[i];
  }
  if (worst >= 1e-10)
    throw SolverError("equilibrium_positions: Newton did not converge, worst residual " +
                      std::to_string(worst));

  std::sort(u.begin(), u.end());
  // symmetrize: the solution is antisymmetric about 0
  for (int i = 0; i < n / 2; ++i) {
    const double m = 0.5 * (u[i] - u[n - 1 - i]);
    u[i] = m;
    u[n - 1 - i] = -m;
  }
  if (n % 2 == 1) u[n / 2] = 0.0;
  return u;
}

namespace {

// pairwise 1/|u_i-u_j|^3 couplings
std::vector<double> inverse_cubed(const std::vector<double>& u) {
  const int n = static_cast<int>(u.size());
  std::vector<double> w(n * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const double d = std::abs(u[i] - u[j]);
      w[i * n + j] = 1.0 / (d * d * d);
    }
  return w;
}

ModeStructure assemble(const TrapConfig& cfg, Axis axis, const SymmetricEigen& eig,
                       const std::vector<double>& freq) {
  ModeStructure ms;
  ms.axis = axis;
  ms.n_ions = cfg.n_ions;
  const int n = cfg.n_ions;

  // sort by frequency ascending, carrying eigenvectors along
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) { return freq[a] < freq[b]; });

  ms.frequencies.resize(n);
  ms.eigenvectors.assign(n, std::vector<double>(n));
  for (int m = 0; m < n; ++m) {
    ms.frequencies[m] = freq[order[m]];
    ms.eigenvectors[m] = eig.eigenvectors[order[m]];
  }
  ms.lamb_dicke = lamb_dicke_matrix(ms, cfg);
  return ms;
}

}  // namespace

ModeStructure axial_modes(const TrapConfig& cfg) {
  cfg.validate();
  const int n = cfg.n_ions;
  const std::vector<double> u = equilibrium_positions(n);
  const std::vector<double> w = inverse_cubed(u);

  // dimensionless axial Hessian: A_ii = 1 + 2 sum_j w_ij, A_ij = -2 w_ij
  std::vector<double> a(n * n, 0.0);
  for (int i = 0; i < n; ++i) {
    double diag = 1.0;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      diag += 2.0 * w[i * n + j];
      a[i * n + j] = -2.0 * w[i * n + j];
    }
    a[i * n + i] = diag;
  }
  const SymmetricEigen eig = jacobi_eigensolve(a, n);
  std::vector<double> freq(n);
  for (int m = 0; m < n; ++m) {
    if (eig.eigenvalues[m] <= 0)
      throw NumericError("axial_modes: non-positive eigenvalue");
    freq[m] = cfg.omega_z * std::sqrt(eig.eigenvalues[m]);
  }
  return assemble(cfg, Axis::axial, eig, freq);
}

ModeStructure radial_modes(const TrapConfig& cfg) {
  cfg.validate();
  const int n = cfg.n_ions;
  const std::vector<double> u = equilibrium_positions(n);
  const std::vector<double> w = inverse_cubed(u);

  // transverse interaction matrix: T_ii = sum_j w_ij, T_ij = -w_ij;
  // omega_m^2 = omega_x^2 - lambda_m omega_z^2
  std::vector<double> t(n * n, 0.0);
  for (int i = 0; i < n; ++i) {
    double diag = 0.0;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      diag += w[i * n + j];
      t[i * n + j] = -w[i * n + j];
    }
    t[i * n + i] = diag;
  }
  const SymmetricEigen eig = jacobi_eigensolve(t, n);
  std::vector<double> freq(n);
  for (int m = 0; m < n; ++m) {
    const double w2 = cfg.omega_x * cfg.omega_x - eig.eigenvalues[m] * cfg.omega_z * cfg.omega_z;
    if (w2 <= 0)
      throw InstabilityError("zigzag instability: radial frequency^2 <= 0 at mode " +
                             std::to_string(m) + " for N=" + std::to_string(n));
    freq[m] = std::sqrt(w2);
  }
  return assemble(cfg, Axis::radial, eig, freq);
}

std::vector<double> lamb_dicke_matrix(const ModeStructure& modes, const TrapConfig& cfg) {
  const int n = modes.n_ions;
  const int nm = static_cast<int>(modes.frequencies.size());
  std::vector<double> eta(n * nm);
  for (int m = 0; m < nm; ++m) {
    const double x0 = std::sqrt(kHbar / (2.0 * cfg.species.mass * modes.frequencies[m]));
    for (int i = 0; i < n; ++i)
      eta[i * nm + m] = cfg.delta_k * x0 * modes.eigenvectors[m][i];
  }
  return eta;
}

}  // namespace ioncool
