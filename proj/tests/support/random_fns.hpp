#ifndef LIMSET_TESTS_RANDOM_FNS_HPP
#define LIMSET_TESTS_RANDOM_FNS_HPP

#include <cmath>
#include <random>
#include <vector>

#include "limset/grid_fn.hpp"

namespace limset_tests {

// Random-walk scalar function with g(0) = 0, roughly unit scale.
inline limset::GridFn random_walk_fn(int n_grid, std::uint32_t seed, double scale = 1.0) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  std::vector<double> vals(static_cast<std::size_t>(n_grid) + 1, 0.0);
  double step = scale / std::sqrt(static_cast<double>(n_grid));
  for (int i = 1; i <= n_grid; ++i) vals[i] = vals[i - 1] + step * nd(rng);
  return limset::GridFn::scalar(std::move(vals));
}

// Random orthonormal basis via Gram-Schmidt on gaussian vectors.
inline std::vector<std::vector<double>> random_basis(int d, std::uint32_t seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  std::vector<std::vector<double>> basis;
  while (static_cast<int>(basis.size()) < d) {
    std::vector<double> v(d);
    for (auto& x : v) x = nd(rng);
    for (const auto& b : basis) {
      double dot = 0.0;
      for (int c = 0; c < d; ++c) dot += v[c] * b[c];
      for (int c = 0; c < d; ++c) v[c] -= dot * b[c];
    }
    double n2 = 0.0;
    for (double x : v) n2 += x * x;
    if (n2 < 1e-12) continue;
    double inv = 1.0 / std::sqrt(n2);
    for (auto& x : v) x *= inv;
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace limset_tests

#endif
