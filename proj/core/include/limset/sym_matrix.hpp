#ifndef LIMSET_SYM_MATRIX_HPP
#define LIMSET_SYM_MATRIX_HPP

#include <cstddef>
#include <vector>

#include "limset/errors.hpp"

namespace limset {

// Dense symmetric matrix, row-major, small dimensions (covariances).
struct SymMatrix {
  int d = 0;
  std::vector<double> a;  // d*d entries

  SymMatrix() = default;
  explicit SymMatrix(int dim) : d(dim) {
    if (dim < 1) throw dimension_error("matrix dimension must be positive");
    a.assign(static_cast<std::size_t>(dim) * dim, 0.0);
  }

  static SymMatrix identity(int dim) {
    SymMatrix m(dim);
    for (int i = 0; i < dim; ++i) m.at(i, i) = 1.0;
    return m;
  }

  double& at(int i, int j) { return a[static_cast<std::size_t>(i) * d + j]; }
  double at(int i, int j) const {
    return a[static_cast<std::size_t>(i) * d + j];
  }

  // Writes both triangles; plain at(i, j) assignment touches one entry only.
  void set(int i, int j, double v) {
    at(i, j) = v;
    at(j, i) = v;
  }

  double trace() const {
    double t = 0.0;
    for (int i = 0; i < d; ++i) t += at(i, i);
    return t;
  }

  // this += scale * v v^T
  void add_outer(double scale, const std::vector<double>& v) {
    if (static_cast<int>(v.size()) != d)
      throw dimension_error("outer-product vector length mismatch");
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) at(i, j) += scale * v[i] * v[j];
  }

  bool operator==(const SymMatrix&) const = default;
};

}  // namespace limset

#endif
