#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "limset/criteria.hpp"
#include "limset/errors.hpp"
#include "limset/moment_model.hpp"
#include "limset/normalizer.hpp"
#include "limset/simulate.hpp"
#include "limset/taut_string.hpp"

using limset::ClusterConfig;
using limset::ClusterPoint;
using limset::ClusterReport;
using limset::CoordinateLaw;
using limset::GaussianModel;
using limset::GridFn;
using limset::IndependentModel;
using limset::NormalizerSeq;
using limset::RngStream;
using limset::SumPoint;
using limset::SymMatrix;

namespace {

GaussianModel identity_gaussian(int d) { return GaussianModel(SymMatrix::identity(d)); }

NormalizerSeq hw() { return NormalizerSeq::sqrt_2n_loglog(); }

}  // namespace

TEST_CASE("checkpoints: geometric schedule") {
  auto marks = limset::geometric_checkpoints(100, 1.1);
  REQUIRE(!marks.empty());
  CHECK(marks.front() == 1);
  CHECK(std::is_sorted(marks.begin(), marks.end()));
  CHECK(std::adjacent_find(marks.begin(), marks.end()) == marks.end());
  CHECK(marks.back() <= 100);
  // the early integers are all present, later ones spread out
  CHECK(std::find(marks.begin(), marks.end(), 2) != marks.end());
  CHECK(std::find(marks.begin(), marks.end(), 3) != marks.end());

  CHECK(limset::geometric_checkpoints(1, 1.1) == std::vector<long long>{1});
  CHECK_THROWS_AS(limset::geometric_checkpoints(0, 1.1), limset::parameter_error);
  CHECK_THROWS_AS(limset::geometric_checkpoints(10, 1.0), limset::parameter_error);
}

TEST_CASE("partial sums: desk-scale band and reproducibility") {
  GaussianModel m = identity_gaussian(1);
  RngStream rng(12345, 0);
  auto pts = limset::simulate_partial_sums(m, hw(), 100000, rng);
  REQUIRE(!pts.empty());
  CHECK(pts.front().n >= 3);  // the closed-form normalizer starts at n = 3
  CHECK(pts.back().n <= 100000);

  // the normalized sup hovers near 1; a wrong normalizer lands near 0.07
  // (sqrt n) or 200 (n), so a generous band still pins the scaling
  double top = 0.0;
  for (const auto& p : pts) top = std::max(top, std::fabs(p.y[0]));
  CHECK(top >= 0.3);
  CHECK(top <= 2.0);

  RngStream rng2(12345, 0);
  auto again = limset::simulate_partial_sums(m, hw(), 100000, rng2);
  REQUIRE(again.size() == pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    CHECK(again[i].n == pts[i].n);
    CHECK(again[i].y[0] == pts[i].y[0]);  // bit-identical replay
  }
}

TEST_CASE("partial sums: zero law stays at the origin") {
  IndependentModel m({CoordinateLaw::zero_law(), CoordinateLaw::zero_law()});
  RngStream rng(7, 0);
  for (const auto& p : limset::simulate_partial_sums(m, hw(), 500, rng)) {
    CHECK(p.y[0] == 0.0);
    CHECK(p.y[1] == 0.0);
  }
}

TEST_CASE("partial sums: antithetic streams flip every draw") {
  GaussianModel m = identity_gaussian(2);
  RngStream a(99, 5), b(99, 5);
  auto plain = limset::simulate_partial_sums(m, hw(), 2000, a);
  auto anti = limset::simulate_partial_sums(m, hw(), 2000, b, 1.1, true);
  REQUIRE(plain.size() == anti.size());
  for (std::size_t i = 0; i < plain.size(); ++i)
    for (int c = 0; c < 2; ++c) CHECK(anti[i].y[c] == -plain[i].y[c]);
}

TEST_CASE("partial sums: validation") {
  GaussianModel m = identity_gaussian(1);
  RngStream rng(1, 0);
  // below the closed-form normalizer range no checkpoint survives
  CHECK_THROWS_AS(limset::simulate_partial_sums(m, hw(), 2, rng),
                  limset::parameter_error);

  limset::StarSet star = limset::StarSet::create({limset::StarSegment{1.0, {1.0}}});
  auto exact = limset::build_example8(star, limset::Example8Model::Mode::exact_log, 2);
  CHECK_THROWS_AS(limset::simulate_partial_sums(*exact, hw(), 100, rng),
                  limset::capability_error);
}

TEST_CASE("path process: shared-stream endpoint consistency") {
  GaussianModel m = identity_gaussian(2);
  RngStream sums_rng(4242, 3);
  auto pts = limset::simulate_partial_sums(m, hw(), 2000, sums_rng);
  const SumPoint& last = pts.back();

  RngStream path_rng(4242, 3);
  GridFn s = limset::simulate_path_process(m, hw(), last.n, 64, path_rng);
  s.validate();
  CHECK(s.dim() == 2);
  CHECK(s.at(0, 0) == 0.0);
  for (int c = 0; c < 2; ++c) CHECK(s.at(64, c) == last.y[c]);  // bit-exact
}

TEST_CASE("path process: grid-aligned nodes carry the partial sums") {
  GaussianModel m = identity_gaussian(1);
  NormalizerSeq seq = hw();
  const int n = 32;

  RngStream rng(5, 1);
  GridFn s = limset::simulate_path_process(m, seq, n, n, rng);

  RngStream replay(5, 1);
  double c_n = std::exp(seq.ln_c(std::log(static_cast<double>(n))));
  double sum = 0.0, x = 0.0;
  for (int i = 1; i <= n; ++i) {
    m.sample(replay, &x);
    sum += x;
    CHECK(s.at(i, 0) == sum / c_n);
  }
}

TEST_CASE("path process: n=1 is the single linear segment") {
  GaussianModel m = identity_gaussian(1);
  // a tabulated normalizer whose range covers n = 1, with c_1 = 1
  NormalizerSeq seq = NormalizerSeq::custom({{0.0, 0.0}, {10.0, 5.0}});
  RngStream rng(8, 2);
  GridFn s = limset::simulate_path_process(m, seq, 1, 16, rng);

  RngStream replay(8, 2);
  double x = 0.0;
  m.sample(replay, &x);
  for (int i = 0; i <= 16; ++i)
    CHECK(s.at(i, 0) == doctest::Approx((i / 16.0) * x).epsilon(1e-15));
}

TEST_CASE("brownian path: degenerate cases") {
  RngStream rng(3, 0);
  SymMatrix zero(2);
  GridFn z = limset::brownian_path(50, 8, zero, 2.0, rng);
  for (int i = 0; i <= 8; ++i)
    for (int c = 0; c < 2; ++c) CHECK(z.at(i, c) == 0.0);

  RngStream rng2(3, 1), replay(3, 1);
  SymMatrix one = SymMatrix::identity(1);
  GridFn w = limset::brownian_path(1, 1, one, 4.0, rng2);
  CHECK(w.at(1, 0) == doctest::Approx(replay.next_normal() / 4.0));

  CHECK_THROWS_AS(limset::brownian_path(10, 4, one, 0.0, rng),
                  limset::parameter_error);
  CHECK_THROWS_AS(limset::brownian_path(0, 4, one, 1.0, rng),
                  limset::parameter_error);
}

TEST_CASE("brownian path: moments match the scaling at three times") {
  // Var path(t) = t n (scale^2)_rr / c^2 per coordinate
  const long long n = 100;
  const double c_n = 10.0;
  const int grid = 16;
  const int reps = 10000;
  SymMatrix scale(2);
  scale.at(0, 0) = 1.0;
  scale.at(1, 1) = 0.5;

  RngStream rng(2718, 0);
  std::vector<int> nodes = {4, 8, 16};  // t = 0.25, 0.5, 1
  std::vector<std::vector<double>> sum(3, std::vector<double>(2, 0.0));
  std::vector<std::vector<double>> sumsq(3, std::vector<double>(2, 0.0));
  for (int r = 0; r < reps; ++r) {
    GridFn p = limset::brownian_path(n, grid, scale, c_n, rng);
    for (std::size_t k = 0; k < nodes.size(); ++k)
      for (int c = 0; c < 2; ++c) {
        double v = p.at(nodes[k], c);
        sum[k][c] += v;
        sumsq[k][c] += v * v;
      }
  }
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    double t = nodes[k] / 16.0;
    for (int c = 0; c < 2; ++c) {
      double s2 = c == 0 ? 1.0 : 0.25;
      double var_theory = t * n * s2 / (c_n * c_n);
      double mean = sum[k][c] / reps;
      double var = sumsq[k][c] / reps - mean * mean;
      double se_mean = std::sqrt(var_theory / reps);
      double se_var = var_theory * std::sqrt(2.0 / reps);
      CHECK(std::fabs(mean) <= 4.0 * se_mean);
      CHECK(std::fabs(var - var_theory) <= 4.0 * se_var);
    }
  }
}

TEST_CASE("small ball: degenerate probabilities") {
  SymMatrix one = SymMatrix::identity(1);
  RngStream rng(11, 0);
  GridFn zero = GridFn::line(0.0, 16);
  auto sure = limset::small_ball_estimate(zero, one, 100.0, 10, 50.0, 200, rng);
  CHECK(sure.p_hat == 1.0);
  CHECK(sure.successes == 200);

  GridFn far = GridFn::line(50.0, 16);
  auto never = limset::small_ball_estimate(far, one, 100.0, 10, 0.1, 200, rng);
  CHECK(never.p_hat == 0.0);
  CHECK(never.se == 0.0);
}

TEST_CASE("small ball: sandwich at the pinned desk parameters") {
  // d=1, lambda=1, n=1e4, c_n from the iterated-log family, radii 0.5 and 1
  const long long n = 10000;
  const double loglog = std::log(std::log(static_cast<double>(n)));
  const double c_n = std::sqrt(2.0 * n * loglog);
  const double rate = c_n * c_n / (2.0 * n);  // = log log n
  const long long reps = 20000;
  SymMatrix one = SymMatrix::identity(1);

  int grid = 64;
  for (double slope : {0.0, 0.5}) {
    GridFn f = GridFn::line(slope, grid);
    double energy = limset::min_energy_in_ball(f, 0.5);
    double bound = std::exp(-energy * rate);

    RngStream ra(1009, 0), rb(1009, 1);
    auto outer = limset::small_ball_estimate(f, one, c_n, n, 1.0, reps, ra);
    auto inner = limset::small_ball_estimate(f, one, c_n, n, 0.5, reps, rb);
    REQUIRE(outer.successes >= 100);

    CHECK(outer.p_hat + 3.0 * outer.se >= 0.5 * bound);
    CHECK(inner.p_hat - 3.0 * inner.se <= bound);
  }

  // a strict-energy case exercises the upper bound away from 1
  GridFn steep = GridFn::line(1.2, grid);
  double energy = limset::min_energy_in_ball(steep, 0.4);
  CHECK(energy == doctest::Approx(0.64).epsilon(1e-6));
  RngStream rc(1009, 2);
  auto est = limset::small_ball_estimate(steep, one, c_n, n, 0.4, reps, rc);
  CHECK(est.p_hat - 3.0 * est.se <= std::exp(-energy * rate));
}

TEST_CASE("empirical cluster: burn-in, thinning, order independence") {
  ClusterConfig cfg;
  cfg.delta = 0.15;

  auto mk = [](int stream, long long n, double a, double b) {
    return ClusterPoint{stream, n, {a, b}};
  };
  std::vector<ClusterPoint> visits = {
      mk(0, 2, 9.0, 9.0),      // below burn-in ceil(1000^0.3) = 8, dropped
      mk(0, 100, 0.0, 0.0), mk(0, 200, 0.1, 0.0), mk(1, 100, 0.2, 0.0),
      mk(1, 400, 0.2, 0.0),  // duplicate state
  };
  ClusterReport rep = limset::empirical_cluster(visits, 1000, cfg);
  CHECK(rep.burn_in == 8);
  CHECK(rep.points.size() == 4);
  CHECK(rep.checkpoints == std::vector<long long>{100, 200, 400});
  // (0,0) keeps, (0.1,0) thins against it, (0.2,0) survives
  REQUIRE(rep.net.size() == 2);
  CHECK(rep.net[0][0] == 0.0);
  CHECK(rep.net[1][0] == 0.2);

  std::reverse(visits.begin(), visits.end());
  ClusterReport rev = limset::empirical_cluster(visits, 1000, cfg);
  CHECK(rev.net == rep.net);
  CHECK(rev.checkpoints == rep.checkpoints);

  std::vector<ClusterPoint> early = {mk(0, 2, 1.0, 0.0)};
  CHECK_THROWS_AS(limset::empirical_cluster(early, 1000, cfg),
                  limset::parameter_error);
}

TEST_CASE("cluster pipeline: worker count never changes the report") {
  GaussianModel m = identity_gaussian(2);
  ClusterConfig cfg;
  cfg.streams = 3;
  cfg.snapshot_count = 2;
  cfg.grid_size = 32;

  cfg.workers = 1;
  ClusterReport serial = limset::run_cluster(m, hw(), 20000, 777, cfg);
  cfg.workers = 3;
  ClusterReport parallel = limset::run_cluster(m, hw(), 20000, 777, cfg);

  REQUIRE(serial.points.size() == parallel.points.size());
  for (std::size_t i = 0; i < serial.points.size(); ++i) {
    CHECK(serial.points[i].stream == parallel.points[i].stream);
    CHECK(serial.points[i].n == parallel.points[i].n);
    CHECK(serial.points[i].y == parallel.points[i].y);
  }
  CHECK(serial.net == parallel.net);
  REQUIRE(serial.snapshots.size() == parallel.snapshots.size());
  CHECK(serial.snapshots.size() == 6);  // 2 per stream
  for (std::size_t i = 0; i < serial.snapshots.size(); ++i)
    CHECK(serial.snapshots[i].path == parallel.snapshots[i].path);

  // snapshots replay the partial-sum stream: endpoint equals the sum point
  for (const auto& snap : serial.snapshots) {
    for (const auto& p : serial.points)
      if (p.stream == snap.stream && p.n == snap.n)
        for (int c = 0; c < 2; ++c) CHECK(snap.path.at(32, c) == p.y[c]);
  }
}

TEST_CASE("cluster pipeline: zero law collapses to the origin") {
  IndependentModel m({CoordinateLaw::zero_law(), CoordinateLaw::zero_law()});
  ClusterConfig cfg;
  cfg.streams = 2;
  cfg.snapshot_count = 0;
  ClusterReport rep = limset::run_cluster(m, hw(), 1000, 5, cfg);
  REQUIRE(rep.net.size() == 1);
  CHECK(rep.net[0] == std::vector<double>{0.0, 0.0});
}

TEST_CASE("predicted set distance per model kind") {
  NormalizerSeq seq = hw();

  GaussianModel g = identity_gaussian(2);
  auto sets = limset::predicted_sets(g, seq);
  double a = sets.alpha.alpha0;
  CHECK(limset::dist_to_predicted_A({0.0, 0.0}, g, sets) == 0.0);
  CHECK(limset::dist_to_predicted_A({0.5 * a, 0.0}, g, sets) == 0.0);
  CHECK(limset::dist_to_predicted_A({a + 0.4, 0.0}, g, sets) ==
        doctest::Approx(0.4).epsilon(1e-9));

  limset::StarSet star = limset::StarSet::create({limset::StarSegment{1.0, {1.0, 0.0}}});
  auto ex = limset::build_example8(star, limset::Example8Model::Mode::exact_log, 2);
  NormalizerSeq p1 = NormalizerSeq::sqrt_2n_loglog_pow(1.0);
  auto ex_sets = limset::predicted_sets(*ex, p1);
  double ea = ex_sets.alpha.alpha0;
  CHECK(limset::dist_to_predicted_A({0.5 * ea, 0.0}, *ex, ex_sets) ==
        doctest::Approx(0.0));
  CHECK(limset::dist_to_predicted_A({0.0, 0.3}, *ex, ex_sets) ==
        doctest::Approx(0.3).epsilon(1e-9));

  IndependentModel ind({CoordinateLaw::gaussian_law(1.0), CoordinateLaw::gaussian_law(1.0)});
  auto ind_sets = limset::predicted_sets(ind, seq);
  double c0 = ind_sets.coordinate[0].alpha0;
  double c1 = ind_sets.coordinate[1].alpha0;
  CHECK(limset::dist_to_predicted_A({c0, c1}, ind, ind_sets) == 0.0);
  CHECK(limset::dist_to_predicted_A({c0 + 0.3, 0.0}, ind, ind_sets) ==
        doctest::Approx(0.3).epsilon(1e-9));

  CHECK_THROWS_AS(limset::dist_to_predicted_A({1.0}, g, sets),
                  limset::dimension_error);
}

TEST_CASE("containment: snapshots drawn from the lower set pass cleanly") {
  GaussianModel m = identity_gaussian(2);
  NormalizerSeq seq = hw();
  auto sets = limset::predicted_sets(m, seq);

  const int grid = 32;
  auto shapes = limset::strassen_sample(grid);
  ClusterReport rep;
  rep.n_max = 1000;
  rep.config.grid_size = grid;
  // snapshots x*g for two predicted extreme points and every sampled shape
  for (std::size_t xi = 0; xi < 2; ++xi) {
    const auto& x = sets.a_points[xi];
    for (const auto& g : shapes) {
      limset::PathSnapshot snap;
      snap.stream = 0;
      snap.n = 1000;
      snap.path = GridFn(2, grid);
      for (int i = 0; i <= grid; ++i)
        for (int c = 0; c < 2; ++c) snap.path.at(i, c) = g.at(i, 0) * x[c];
      rep.snapshots.push_back(std::move(snap));
    }
  }

  auto sum = limset::containment_check(rep, sets, m, 1e-6);
  CHECK(sum.upper_violations == 0);
  CHECK(sum.sqrt_violations == 0);
  CHECK(sum.max_upper_dist <= 1e-6);
  CHECK(sum.max_sqrt_excess <= 1e-6);
  CHECK(sum.probe_count == static_cast<long long>(sets.a_points.size() * shapes.size()));
  // every probe built from the two used extreme points is matched exactly;
  // the rest may or may not be near a snapshot
  CHECK(sum.probes_covered >= static_cast<long long>(2 * shapes.size()));
  CHECK(sum.coverage >= 0.0);
  CHECK(sum.coverage <= 1.0);
}

TEST_CASE("containment: an overscaled line is flagged with distance 1/2") {
  GaussianModel m = identity_gaussian(2);
  limset::PredictedSets sets;
  sets.alpha = {1.0, 1.0, 1.0};
  sets.coordinate = {{1.0, 1.0, 1.0}, {1.0, 1.0, 1.0}};
  // a_points left empty: the lower probes are vacuous and flagged

  const int grid = 64;
  ClusterReport rep;
  rep.n_max = 100;
  rep.config.grid_size = grid;
  limset::PathSnapshot snap;
  snap.stream = 0;
  snap.n = 100;
  snap.path = GridFn(2, grid);
  for (int i = 0; i <= grid; ++i) snap.path.at(i, 0) = 1.5 * i / grid;
  rep.snapshots.push_back(std::move(snap));

  auto sum = limset::containment_check(rep, sets, m, 0.1);
  CHECK(sum.upper_violations == 1);
  CHECK(sum.max_upper_dist == doctest::Approx(0.5).epsilon(1e-3));
  CHECK(sum.sqrt_violations == 1);
  CHECK(sum.max_sqrt_excess == doctest::Approx(0.5).epsilon(1e-3));
  CHECK(sum.probes_flagged_empty);
  CHECK(sum.coverage == 1.0);
}

TEST_CASE("containment: no snapshots leaves probes uncovered") {
  GaussianModel m = identity_gaussian(2);
  NormalizerSeq seq = hw();
  auto sets = limset::predicted_sets(m, seq);
  ClusterReport rep;
  rep.n_max = 10;
  rep.config.grid_size = 16;
  auto sum = limset::containment_check(rep, sets, m, 0.1);
  CHECK(sum.snapshots_empty);
  CHECK(sum.coverage == 0.0);
  CHECK(sum.probe_count > 0);
}

TEST_CASE("talagrand diagnostic: informational numbers") {
  RngStream rng(31, 0);
  auto diag = limset::talagrand_diagnostic(100, 32, 1.2, 2.0, 1.0, 200, rng);
  CHECK(diag.empirical >= 0.0);
  CHECK(diag.empirical <= 1.0);
  CHECK(diag.bound ==
        doctest::Approx(std::exp(1.0 / 4.0 - 2.0 * 1.2 / 2.0 - 1.2 * 1.2 / 2.0)));
  CHECK(diag.reps == 200);
  CHECK_THROWS_AS(limset::talagrand_diagnostic(100, 32, 0.0, 1.0, 1.0, 10, rng),
                  limset::parameter_error);
}
