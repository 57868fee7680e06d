#pragma once

#include <vector>

namespace ioncool {

// Eigen decomposition of a small dense symmetric matrix.
// eigenvalues ascending, eigenvectors[m] is the (orthonormal) column for
// eigenvalue m, canonicalized so the largest-magnitude component is positive.
struct SymmetricEigen {
  std::vector<double> eigenvalues;
  std::vector<std::vector<double>> eigenvectors;
};

// Cyclic Jacobi rotations; intended for n <= ~128. a is row-major n*n and
// must be symmetric. Throws SolverError if the off-diagonal norm does not
// fall below tolerance within the sweep limit.
SymmetricEigen jacobi_eigensolve(const std::vector<double>& a, int n);

}  // namespace ioncool
