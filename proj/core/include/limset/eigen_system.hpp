#ifndef LIMSET_EIGEN_SYSTEM_HPP
#define LIMSET_EIGEN_SYSTEM_HPP

#include <vector>

#include "limset/sym_matrix.hpp"

namespace limset {

// Eigendecomposition of a small symmetric PSD matrix (covariance).
// Eigenvalues are sorted descending and clamped to zero below
// 1e-12 * trace; rank counts the survivors. vectors stores the
// orthonormal eigenvectors by rows: row i is the eigenvector u_i
// belonging to values[i].
struct EigenSystem {
  int d = 0;
  std::vector<double> values;
  std::vector<double> vectors;  // row-major, d*d
  int rank = 0;

  double vector_at(int i, int j) const {
    return vectors[static_cast<std::size_t>(i) * d + j];
  }
  // <u_i, x> for a d-vector x.
  double project(int i, const std::vector<double>& x) const;
};

// Cyclic Jacobi rotations; supported up to d = 8 (capability error beyond).
// The input must be symmetric to 1e-9 relative; minor asymmetry is averaged
// away before iterating.
EigenSystem eigen_decompose(const SymMatrix& m);

}  // namespace limset

#endif
