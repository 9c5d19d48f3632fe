#include <doctest.h>

#include <cmath>
#include <sstream>

#include "limset/errors.hpp"
#include "limset/grid_fn.hpp"
#include "limset/taut_string.hpp"
#include "qp_oracle.hpp"
#include "random_fns.hpp"

using limset::GridFn;
using limset::dirichlet_energy;
using limset::taut_string;

namespace {

GridFn tent(int n_grid) {
  GridFn f(1, n_grid);
  for (int i = 0; i <= n_grid; ++i) {
    double t = f.t(i);
    f.at(i, 0) = std::min(2.0 * t, 1.0) - std::max(0.0, 2.0 * t - 1.0);
  }
  return f;
}

}  // namespace

TEST_CASE("dirichlet energy on lines and zero") {
  CHECK(dirichlet_energy(GridFn::line(1.0, 64)) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(dirichlet_energy(GridFn(1, 64)) == 0.0);
  CHECK(dirichlet_energy(GridFn::line(-2.5, 100)) == doctest::Approx(6.25).epsilon(1e-14));
}

TEST_CASE("dirichlet energy scaling and symmetry") {
  for (std::uint32_t seed : {11u, 12u, 13u}) {
    GridFn g = limset_tests::random_walk_fn(96, seed);
    double e = dirichlet_energy(g);
    GridFn g2 = g, gneg = g;
    const double lam = 1.7;
    for (int i = 0; i <= 96; ++i) {
      g2.at(i, 0) *= lam;
      gneg.at(i, 0) = -gneg.at(i, 0);
    }
    CHECK(dirichlet_energy(g2) == doctest::Approx(lam * lam * e).epsilon(1e-12));
    CHECK(dirichlet_energy(gneg) == e);
  }
}

TEST_CASE("vector energy adds components") {
  GridFn f(2, 32);
  for (int i = 0; i <= 32; ++i) {
    f.at(i, 0) = f.t(i);
    f.at(i, 1) = 2.0 * f.t(i);
  }
  CHECK(dirichlet_energy(f) == doctest::Approx(5.0).epsilon(1e-14));
}

TEST_CASE("taut string on the identity line") {
  auto sol = taut_string(GridFn::line(1.0, 64), 0.25);
  CHECK(sol.energy == doctest::Approx(0.5625).epsilon(1e-12));
  for (int i = 0; i <= 64; ++i)
    CHECK(sol.minimizer.at(i, 0) == doctest::Approx(0.75 * sol.minimizer.t(i)).epsilon(1e-12));
}

TEST_CASE("taut string vanishes when the tube contains zero") {
  GridFn g = limset_tests::random_walk_fn(64, 21, 0.3);
  double eps = g.sup_norm() + 1e-9;
  auto sol = taut_string(g, eps);
  CHECK(sol.energy == 0.0);
}

TEST_CASE("line slopes clip to (a - eps)+") {
  for (double a : {0.5, 1.0, 2.0, 3.0}) {
    for (double eps : {0.1, 0.6, 1.5}) {
      double expect = std::max(0.0, a - eps);
      CHECK(limset::min_energy_in_ball(GridFn::line(a, 48), eps) ==
            doctest::Approx(expect * expect).epsilon(1e-10));
    }
  }
}

TEST_CASE("tent map against the box QP") {
  GridFn g = tent(64);
  auto sol = taut_string(g, 0.1);
  auto qp = limset_tests::solve_tube_qp(g.values(), 0.1);
  CHECK(std::fabs(sol.energy - qp.energy) <= 1e-6);
}

TEST_CASE("random tubes against the box QP") {
  for (std::uint32_t seed : {101u, 102u, 103u, 104u}) {
    for (int n : {16, 64, 128}) {
      GridFn g = limset_tests::random_walk_fn(n, seed);
      for (double eps : {0.05, 0.1, 0.3}) {
        auto sol = taut_string(g, eps);
        auto qp = limset_tests::solve_tube_qp(g.values(), eps);
        INFO("seed ", seed, " n ", n, " eps ", eps);
        CHECK(std::fabs(sol.energy - qp.energy) <= 1e-6);
        // the walk's output must itself live in the tube
        for (int i = 1; i <= n; ++i) {
          CHECK(sol.minimizer.at(i, 0) >= g.at(i, 0) - eps - 1e-12);
          CHECK(sol.minimizer.at(i, 0) <= g.at(i, 0) + eps + 1e-12);
        }
      }
    }
  }
}

TEST_CASE("tube energy is monotone in eps") {
  GridFn g = limset_tests::random_walk_fn(80, 55);
  double prev = dirichlet_energy(g);
  for (double eps : {0.02, 0.05, 0.1, 0.2, 0.4, 0.8}) {
    double e = limset::min_energy_in_ball(g, eps);
    CHECK(e <= prev + 1e-12);
    prev = e;
  }
}

TEST_CASE("distance to scaled Strassen ball, line case") {
  CHECK(limset::dist_to_scaled_strassen(GridFn::line(2.0, 64), 1.0) ==
        doctest::Approx(1.0).epsilon(1e-6));
  CHECK(limset::dist_to_scaled_strassen(GridFn::line(0.5, 64), 1.0) == 0.0);
}

TEST_CASE("distance matches a dense-eps QP scan") {
  GridFn g = limset_tests::random_walk_fn(64, 77, 2.0);
  const double alpha = 1.0;
  double dist = limset::dist_to_scaled_strassen(g, alpha);
  // oracle: scan eps densely, locate the first QP energy <= alpha^2
  double lo = 0.0, hi = g.sup_norm();
  const int steps = 400;
  double prev_eps = lo, prev_e = limset_tests::solve_tube_qp(g.values(), 0.0).energy;
  double crossing = hi;
  for (int s = 1; s <= steps; ++s) {
    double eps = lo + (hi - lo) * s / steps;
    double e = limset_tests::solve_tube_qp(g.values(), eps).energy;
    if (e <= alpha * alpha) {
      // linear interpolation between neighbouring scan points
      double w = (prev_e - alpha * alpha) / (prev_e - e);
      crossing = prev_eps + w * (eps - prev_eps);
      break;
    }
    prev_eps = eps;
    prev_e = e;
  }
  CHECK(dist == doctest::Approx(crossing).epsilon(0).scale(0).epsilon(0.01));
}

TEST_CASE("projection scales energy by the squared coefficient") {
  GridFn g = limset_tests::random_walk_fn(64, 31);
  double eg = dirichlet_energy(g);
  std::vector<double> x = {0.6, -0.8};
  GridFn f(2, 64);
  for (int i = 0; i <= 64; ++i) {
    f.at(i, 0) = x[0] * g.at(i, 0);
    f.at(i, 1) = x[1] * g.at(i, 0);
  }
  std::vector<double> u = {1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)};
  GridFn p = limset::project_direction(f, u);
  double dot = u[0] * x[0] + u[1] * x[1];
  CHECK(dirichlet_energy(p) == doctest::Approx(dot * dot * eg).epsilon(1e-12));
  CHECK_THROWS_AS(limset::project_direction(f, {1.0, 1.0}), limset::parameter_error);
}

TEST_CASE("decomposition reconstructs with unit-energy directions") {
  GridFn f(3, 48);
  std::mt19937 rng(9);
  std::normal_distribution<double> nd(0.0, 1.0);
  for (int i = 1; i <= 48; ++i)
    for (int c = 0; c < 3; ++c)
      f.at(i, c) = f.at(i - 1, c) + nd(rng) / std::sqrt(48.0) * (c == 2 ? 0.0 : 1.0);
  auto dec = limset::representation_decompose(f);
  REQUIRE(dec.scales.size() == 3);
  CHECK(dec.scales[2] == 0.0);
  for (int c = 0; c < 3; ++c) {
    if (dec.scales[c] > 0)
      CHECK(dirichlet_energy(dec.directions[c]) == doctest::Approx(1.0).epsilon(1e-9));
    for (int i = 0; i <= 48; ++i)
      CHECK(dec.scales[c] * dec.directions[c].at(i, 0) ==
            doctest::Approx(f.at(i, c)).epsilon(1e-12));
  }
}

TEST_CASE("parseval energy is basis independent") {
  std::mt19937 rng(4);
  std::normal_distribution<double> nd(0.0, 1.0);
  GridFn f(3, 64);
  for (int i = 1; i <= 64; ++i)
    for (int c = 0; c < 3; ++c) f.at(i, c) = f.at(i - 1, c) + nd(rng) / 8.0;
  double direct = dirichlet_energy(f);
  for (std::uint32_t seed : {1u, 2u, 3u}) {
    auto basis = limset_tests::random_basis(3, seed);
    double viaBasis = limset::parseval_energy(f, basis);
    CHECK(viaBasis == doctest::Approx(direct).epsilon(1e-9));
  }
  CHECK_THROWS_AS(limset::parseval_energy(f, {{1, 0, 0}, {1, 0, 0}, {0, 0, 1}}),
                  limset::parameter_error);
}

TEST_CASE("unit-energy functions obey the Strassen ball geometry") {
  auto sample = limset::strassen_sample(64);
  REQUIRE(sample.size() == 8);
  for (const auto& g : sample) {
    CHECK(dirichlet_energy(g) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(g.sup_norm() <= 1.0 + 1e-12);
    for (int i = 0; i <= 64; ++i)
      for (int j = i + 1; j <= 64; ++j)
        CHECK(std::fabs(g.at(j, 0) - g.at(i, 0)) <=
              std::sqrt((j - i) / 64.0) + 1e-12);
  }
}

TEST_CASE("grid function json and csv round trips") {
  GridFn f(2, 8);
  for (int i = 1; i <= 8; ++i) {
    f.at(i, 0) = 0.1 * i;
    f.at(i, 1) = -0.25 * i * i / 64.0;
  }
  GridFn fj = limset::grid_fn_from_json(limset::grid_fn_to_json(f));
  CHECK(fj == f);
  std::stringstream ss;
  limset::grid_fn_to_csv(f, ss);
  GridFn fc = limset::grid_fn_from_csv(ss);
  CHECK(fc == f);
}

TEST_CASE("grid function validation") {
  CHECK_THROWS_AS(GridFn(1, 4, {0.5, 0, 0, 0, 0}), limset::parameter_error);
  CHECK_THROWS_AS(GridFn(0, 4), limset::dimension_error);
}
