#include "jacobi.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "errors.hpp"

namespace ioncool {

namespace {

double offdiag_norm(const std::vector<double>& a, int n) {
  double s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) s += a[i * n + j] * a[i * n + j];
  return std::sqrt(2.0 * s);
}

}  // namespace

SymmetricEigen jacobi_eigensolve(const std::vector<double>& a_in, int n) {
  std::vector<double> a = a_in;
  std::vector<double> v(n * n, 0.0);
  for (int i = 0; i < n; ++i) v[i * n + i] = 1.0;

  double norm = 0.0;
  for (double x : a) norm += x * x;
  norm = std::sqrt(norm);
  const double tol = (norm > 0 ? norm : 1.0) * 1e-15;

  const int max_sweeps = 64;
  int sweep = 0;
  for (; sweep < max_sweeps; ++sweep) {
    if (offdiag_norm(a, n) < tol) break;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a[p * n + q];
        if (std::abs(apq) < tol / (n * n)) continue;
        const double app = a[p * n + p];
        const double aqq = a[q * n + q];
        const double theta = 0.5 * (aqq - app) / apq;
        double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        if (theta < 0) t = -t;
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const double tau = s / (1.0 + c);
        a[p * n + p] = app - t * apq;
        a[q * n + q] = aqq + t * apq;
        a[p * n + q] = 0.0;
        a[q * n + p] = 0.0;
        for (int i = 0; i < n; ++i) {
          if (i != p && i != q) {
            const double aip = a[i * n + p];
            const double aiq = a[i * n + q];
            a[i * n + p] = aip - s * (aiq + tau * aip);
            a[i * n + q] = aiq + s * (aip - tau * aiq);
            a[p * n + i] = a[i * n + p];
            a[q * n + i] = a[i * n + q];
          }
          const double vip = v[i * n + p];
          const double viq = v[i * n + q];
          v[i * n + p] = vip - s * (viq + tau * vip);
          v[i * n + q] = viq + s * (vip - tau * viq);
        }
      }
    }
  }
  if (sweep == max_sweeps && offdiag_norm(a, n) >= tol * 10)
    throw SolverError("jacobi eigensolver did not converge, off-diagonal norm " +
                      std::to_string(offdiag_norm(a, n)));

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int x, int y) { return a[x * n + x] < a[y * n + y]; });

  SymmetricEigen out;
  out.eigenvalues.resize(n);
  out.eigenvectors.assign(n, std::vector<double>(n));
  for (int m = 0; m < n; ++m) {
    const int col = order[m];
    out.eigenvalues[m] = a[col * n + col];
    // fix overall sign: largest-magnitude component positive
    int imax = 0;
    for (int i = 1; i < n; ++i)
      if (std::abs(v[i * n + col]) > std::abs(v[imax * n + col])) imax = i;
    const double sign = v[imax * n + col] < 0 ? -1.0 : 1.0;
    for (int i = 0; i < n; ++i) out.eigenvectors[m][i] = sign * v[i * n + col];
  }
  return out;
}

}  // namespace ioncool
