#include "limset/eigen_system.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "limset/errors.hpp"

namespace limset {

double EigenSystem::project(int i, const std::vector<double>& x) const {
  if (static_cast<int>(x.size()) != d)
    throw dimension_error("projection vector length mismatch");
  double s = 0.0;
  for (int j = 0; j < d; ++j) s += vector_at(i, j) * x[j];
  return s;
}

EigenSystem eigen_decompose(const SymMatrix& m) {
  const int d = m.d;
  if (d < 1) throw dimension_error("eigendecomposition of empty matrix");
  if (d > 8)
    throw capability_error(
        "Jacobi eigendecomposition supports dimensions up to 8");

  double scale = 0.0;
  for (double v : m.a) scale = std::max(scale, std::abs(v));
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      if (std::abs(m.at(i, j) - m.at(j, i)) > 1e-9 * std::max(scale, 1.0))
        throw parameter_error("eigendecomposition input is not symmetric");

  // Work on the symmetrized copy; accumulate rotations into V (columns are
  // eigenvectors while iterating).
  std::vector<double> a(static_cast<std::size_t>(d) * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      a[static_cast<std::size_t>(i) * d + j] =
          0.5 * (m.at(i, j) + m.at(j, i));
  std::vector<double> v(static_cast<std::size_t>(d) * d, 0.0);
  for (int i = 0; i < d; ++i) v[static_cast<std::size_t>(i) * d + i] = 1.0;

  auto A = [&](int i, int j) -> double& {
    return a[static_cast<std::size_t>(i) * d + j];
  };
  auto V = [&](int i, int j) -> double& {
    return v[static_cast<std::size_t>(i) * d + j];
  };

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < d; ++p)
      for (int q = p + 1; q < d; ++q) off += A(p, q) * A(p, q);
    if (off <= 1e-30 * std::max(scale * scale, 1e-300)) break;

    for (int p = 0; p < d; ++p) {
      for (int q = p + 1; q < d; ++q) {
        const double apq = A(p, q);
        if (apq == 0.0) continue;
        const double theta = (A(q, q) - A(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int i = 0; i < d; ++i) {
          const double aip = A(i, p), aiq = A(i, q);
          A(i, p) = c * aip - s * aiq;
          A(i, q) = s * aip + c * aiq;
        }
        for (int i = 0; i < d; ++i) {
          const double api = A(p, i), aqi = A(q, i);
          A(p, i) = c * api - s * aqi;
          A(q, i) = s * api + c * aqi;
        }
        for (int i = 0; i < d; ++i) {
          const double vip = V(i, p), viq = V(i, q);
          V(i, p) = c * vip - s * viq;
          V(i, q) = s * vip + c * viq;
        }
      }
    }
  }

  std::vector<int> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int x, int y) { return A(x, x) > A(y, y); });

  EigenSystem sys;
  sys.d = d;
  sys.values.resize(d);
  sys.vectors.resize(static_cast<std::size_t>(d) * d);
  const double clamp = 1e-12 * std::abs(m.trace());
  for (int i = 0; i < d; ++i) {
    double lambda = A(order[i], order[i]);
    if (lambda < clamp || lambda < 0.0) lambda = 0.0;
    sys.values[i] = lambda;
    for (int j = 0; j < d; ++j)
      sys.vectors[static_cast<std::size_t>(i) * d + j] = V(j, order[i]);
  }
  sys.rank = static_cast<int>(
      std::count_if(sys.values.begin(), sys.values.end(),
                    [](double x) { return x > 0.0; }));
  return sys;
}

}  // namespace limset
