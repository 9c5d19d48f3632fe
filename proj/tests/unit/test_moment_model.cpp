#include <doctest.h>

#include <cmath>
#include <limits>
#include <memory>
#include <vector>

#include "limset/errors.hpp"
#include "limset/eigen_system.hpp"
#include "limset/moment_model.hpp"
#include "limset/rng_stream.hpp"

using limset::BlockLadder;
using limset::BlockPos;
using limset::CoordinateLaw;
using limset::Example8Model;
using limset::GaussianModel;
using limset::IndependentModel;
using limset::MomentModel;
using limset::RngStream;
using limset::StarSegment;
using limset::StarSet;
using limset::SymMatrix;
using limset::build_example8;
using limset::model_from_json;
using limset::star_from_json;

namespace {

const double kLn3 = std::log(3.0);
const double kInf = std::numeric_limits<double>::infinity();

// E[y^2 1{|y| <= a}] for standard normal y.
double d1_weight(double a) {
  return std::erf(a / M_SQRT2) -
         a * std::sqrt(2.0 / M_PI) * std::exp(-0.5 * a * a);
}

// P(chi^2_4 <= c) and P(chi^2_5 <= c): closed forms used as quadrature
// oracles via E[y_i^2 1{chi^2_k <= c}] = P(chi^2_{k+2} <= c).
double chi2_4_cdf(double c) { return 1.0 - std::exp(-0.5 * c) * (1.0 + 0.5 * c); }
double chi2_5_cdf(double c) {
  return std::erf(std::sqrt(0.5 * c)) -
         std::sqrt(2.0 * c / M_PI) * std::exp(-0.5 * c) * (1.0 + c / 3.0);
}

SymMatrix diff(const SymMatrix& hi, const SymMatrix& lo) {
  SymMatrix d(hi.d);
  for (std::size_t i = 0; i < d.a.size(); ++i) d.a[i] = hi.a[i] - lo.a[i];
  return d;
}

// Smallest eigenvalue via the raw Jacobi path (no clamping): use the
// characteristic closed form for d = 2, power-iteration complement otherwise.
double min_eig_2x2(const SymMatrix& m) {
  const double tr = m.at(0, 0) + m.at(1, 1);
  const double det = m.at(0, 0) * m.at(1, 1) - m.at(0, 1) * m.at(1, 0);
  const double disc = std::sqrt(std::max(0.0, 0.25 * tr * tr - det));
  return 0.5 * tr - disc;
}

StarSet single_segment_star() {
  StarSegment seg;
  seg.sigma = 1.0;
  seg.z = {1.0, 0.0};
  return StarSet::create({seg});
}

StarSet two_segment_star() {
  StarSegment s1, s2;
  s1.sigma = 1.0;
  s1.z = {1.0, 0.0};
  s2.sigma = 0.8;  // 0.64 >= 1/2, so no padding is inserted
  s2.z = {0.0, 1.0};
  return StarSet::create({s1, s2});
}

}  // namespace

// ---------------------------------------------------------------------------
// Gaussian

TEST_CASE("gaussian d=1 truncated variance matches the closed form") {
  SymMatrix cov(1);
  cov.at(0, 0) = 2.25;  // sigma = 1.5
  GaussianModel model(cov);
  for (double t : {0.5, 1.0, 2.0, 5.0, 10.0}) {
    const double want = 2.25 * d1_weight(t / 1.5);
    SymMatrix got = model.trunc_cov(std::log(t));
    CHECK(got.at(0, 0) == doctest::Approx(want).epsilon(1e-9));
    CHECK(model.coord_trunc_var(0, std::log(t)) ==
          doctest::Approx(want).epsilon(1e-9));
  }
  CHECK(model.trunc_cov(std::log(1000.0)) == cov);
}

TEST_CASE("gaussian isotropic quadrature agrees with chi-square identities") {
  // d = 2, cov = 2 I: E[x_i^2 1{|x| <= t}] = 2 P(chi^2_4 <= t^2/2)
  SymMatrix cov2 = SymMatrix::identity(2);
  cov2.at(0, 0) = cov2.at(1, 1) = 2.0;
  GaussianModel g2(cov2);
  for (double t : {0.7, 1.5, 3.0, 6.0}) {
    const double want = 2.0 * chi2_4_cdf(t * t / 2.0);
    SymMatrix got = g2.trunc_cov(std::log(t));
    CHECK(got.at(0, 0) == doctest::Approx(want).epsilon(1e-8));
    CHECK(got.at(1, 1) == doctest::Approx(want).epsilon(1e-8));
    CHECK(std::abs(got.at(0, 1)) < 1e-12);
  }

  // d = 3, cov = I: E[x_i^2 1{|x| <= t}] = P(chi^2_5 <= t^2)
  GaussianModel g3(SymMatrix::identity(3));
  for (double t : {0.8, 1.7, 3.5}) {
    const double want = chi2_5_cdf(t * t);
    SymMatrix got = g3.trunc_cov(std::log(t));
    for (int i = 0; i < 3; ++i)
      CHECK(got.at(i, i) == doctest::Approx(want).epsilon(1e-7));
  }
  // ln_H is the top truncated eigen-mass
  CHECK(g3.ln_H(std::log(1.7)) ==
        doctest::Approx(std::log(chi2_5_cdf(1.7 * 1.7))).epsilon(1e-7));
}

TEST_CASE("gaussian rank-deficient covariance uses the active subspace") {
  SymMatrix cov(2);
  cov.at(0, 0) = cov.at(1, 1) = 1.0;
  cov.set(0, 1, 1.0);  // rank 1, lambda = 2 along (1,1)/sqrt(2)
  GaussianModel model(cov);
  for (double t : {0.5, 1.3, 4.0}) {
    const double w = d1_weight(t / std::sqrt(2.0));
    SymMatrix got = model.trunc_cov(std::log(t));
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        CHECK(got.at(i, j) == doctest::Approx(w).epsilon(1e-9));
  }
}

TEST_CASE("gaussian truncation is monotone with PSD increments") {
  SymMatrix cov(2);
  cov.at(0, 0) = 2.0;
  cov.at(1, 1) = 2.0;
  cov.set(0, 1, 1.0);
  GaussianModel model(cov);
  SymMatrix prev = model.trunc_cov(std::log(0.25));
  for (double t : {0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 64.0}) {
    SymMatrix cur = model.trunc_cov(std::log(t));
    CHECK(min_eig_2x2(diff(cur, prev)) >= -1e-10);
    prev = cur;
  }
  CHECK(prev == model.cov());  // 64 is past the 8 sigma cutoff
}

TEST_CASE("gaussian four active dimensions only above the cutoff") {
  GaussianModel model(SymMatrix::identity(4));
  CHECK(model.trunc_cov(std::log(8.0)) == SymMatrix::identity(4));
  CHECK(model.trunc_cov(kInf) == SymMatrix::identity(4));
  CHECK_THROWS_AS(model.trunc_cov(std::log(3.0)), limset::capability_error);
}

TEST_CASE("gaussian tail bound is erfc in one dimension") {
  GaussianModel model(SymMatrix::identity(1));
  for (double t : {0.5, 1.0, 3.0, 8.0, 20.0}) {
    const double want = std::log(std::erfc(t / M_SQRT2));
    CHECK(model.ln_tail(std::log(t)) == doctest::Approx(want).epsilon(1e-10));
  }
  CHECK(model.ln_tail(kInf) == -kInf);
  // decreasing in t, continuous across the large-z switchover
  CHECK(model.ln_tail(std::log(24.9)) > model.ln_tail(std::log(25.1)));
  CHECK(model.ln_tail(std::log(25.1)) > model.ln_tail(std::log(40.0)));
}

TEST_CASE("gaussian epochs bucket below the cutoff and freeze above") {
  GaussianModel model(SymMatrix::identity(2));
  CHECK(model.cov_epoch(std::log(8.0)) == 0);
  CHECK(model.cov_epoch(std::log(100.0)) == 0);
  CHECK(model.cov_epoch(std::log(7.9)) != 0);
  CHECK(model.cov_epoch(std::log(7.9)) == model.cov_epoch(std::log(7.85)));
  CHECK(model.cov_epoch(std::log(7.9)) != model.cov_epoch(std::log(4.0)));
}

TEST_CASE("gaussian sampler matches its own analytics") {
  SymMatrix cov(2);
  cov.at(0, 0) = 2.0;
  cov.at(1, 1) = 2.0;
  cov.set(0, 1, 1.0);
  GaussianModel model(cov);
  REQUIRE(model.can_sample());

  RngStream rng(2024u, 11u);
  const std::size_t n = 400000;
  std::vector<double> batch = model.sample_batch(rng, n);

  // empirical covariance within 3 SE entrywise
  double m00 = 0, m01 = 0, m11 = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = batch[2 * i], y = batch[2 * i + 1];
    m00 += x * x;
    m01 += x * y;
    m11 += y * y;
  }
  m00 /= n;
  m01 /= n;
  m11 /= n;
  const double se = 2.0 * std::sqrt(2.0 / static_cast<double>(n));
  CHECK(std::abs(m00 - 2.0) < 3.0 * se);
  CHECK(std::abs(m11 - 2.0) < 3.0 * se);
  CHECK(std::abs(m01 - 1.0) < 3.0 * se);

  // empirical truncated second moments against the quadrature, t = 1.8
  const double t = 1.8;
  SymMatrix want = model.trunc_cov(std::log(t));
  double s00 = 0, s01 = 0, s11 = 0, v00 = 0, v01 = 0, v11 = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = batch[2 * i], y = batch[2 * i + 1];
    if (x * x + y * y > t * t) continue;
    s00 += x * x;
    s01 += x * y;
    s11 += y * y;
    v00 += x * x * x * x;
    v01 += x * y * x * y;
    v11 += y * y * y * y;
  }
  const double inv = 1.0 / static_cast<double>(n);
  auto check_entry = [&](double sum, double sq, double target) {
    const double mean = sum * inv;
    const double var = std::max(sq * inv - mean * mean, 0.0);
    const double sd = std::sqrt(var * inv);
    CHECK(std::abs(mean - target) < 4.0 * sd + 1e-12);
  };
  check_entry(s00, v00, want.at(0, 0));
  check_entry(s01, v01, want.at(0, 1));
  check_entry(s11, v11, want.at(1, 1));
}

TEST_CASE("gaussian sampler determinism across stream handles") {
  GaussianModel model(SymMatrix::identity(3));
  RngStream a(99u, 4u), b(99u, 4u), c(99u, 5u);
  std::vector<double> batch_a = model.sample_batch(a, 64);
  std::vector<double> batch_b = model.sample_batch(b, 64);
  std::vector<double> batch_c = model.sample_batch(c, 64);
  CHECK(batch_a == batch_b);
  CHECK(batch_a != batch_c);
}

TEST_CASE("gaussian rejects indefinite covariance") {
  SymMatrix bad(2);
  bad.at(0, 0) = 1.0;
  bad.at(1, 1) = 1.0;
  bad.set(0, 1, 1.5);  // eigenvalues 2.5 and -0.5
  CHECK_THROWS_AS(GaussianModel{bad}, limset::parameter_error);
}

// ---------------------------------------------------------------------------
// Independent coordinates

TEST_CASE("independent model is diagonal with closed-form entries") {
  std::vector<CoordinateLaw> laws;
  laws.push_back(CoordinateLaw::gaussian_law(1.0));
  laws.push_back(CoordinateLaw::discrete_law({{2.0, 0.1}}));
  laws.push_back(CoordinateLaw::zero_law());
  IndependentModel model(std::move(laws));
  REQUIRE(model.dim() == 3);

  SymMatrix low = model.trunc_cov(std::log(1.5));
  CHECK(low.at(0, 0) == doctest::Approx(d1_weight(1.5)).epsilon(1e-12));
  CHECK(low.at(1, 1) == 0.0);  // the atom at 2 is not yet captured
  CHECK(low.at(2, 2) == 0.0);
  CHECK(low.at(0, 1) == 0.0);

  SymMatrix high = model.trunc_cov(std::log(3.0));
  CHECK(high.at(1, 1) == doctest::Approx(0.8).epsilon(1e-12));  // 2*0.1*4

  // trace identity with coord_trunc_var
  for (double ln_t : {std::log(0.5), std::log(1.5), std::log(3.0), 30.0}) {
    SymMatrix m = model.trunc_cov(ln_t);
    double tr = 0.0;
    for (int i = 0; i < 3; ++i) tr += model.coord_trunc_var(i, ln_t);
    CHECK(m.trace() == doctest::Approx(tr).epsilon(1e-13));
  }

  // the epoch freezes past the largest per-law cutoff (8 sigma here)
  CHECK(model.cov_epoch(std::log(8.1)) == 0);
  CHECK(model.cov_epoch(std::log(7.9)) != 0);

  // union tail: at t < 2*sqrt(3) the discrete coordinate can still exceed
  const double t = 2.0;
  const double per = t / std::sqrt(3.0);
  const double want =
      std::erfc(per / M_SQRT2) + 0.2;  // gaussian coord + discrete coord
  CHECK(model.ln_tail(std::log(t)) ==
        doctest::Approx(std::log(want)).epsilon(1e-12));
}

TEST_CASE("independent sampler is symmetric and matches the atom masses") {
  std::vector<CoordinateLaw> laws;
  laws.push_back(CoordinateLaw::gaussian_law(1.0));
  laws.push_back(CoordinateLaw::discrete_law({{2.0, 0.1}}));
  IndependentModel model(std::move(laws));
  RngStream rng(7u, 3u);
  const std::size_t n = 200000;
  std::vector<double> batch = model.sample_batch(rng, n);
  double mean0 = 0.0, mean1 = 0.0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mean0 += batch[2 * i];
    mean1 += batch[2 * i + 1];
    if (batch[2 * i + 1] != 0.0) ++hits;
  }
  mean0 /= n;
  mean1 /= n;
  // 3 SE of a zero-mean sample average
  CHECK(std::abs(mean0) < 3.0 / std::sqrt(static_cast<double>(n)));
  CHECK(std::abs(mean1) < 3.0 * 2.0 * std::sqrt(0.2 / static_cast<double>(n)));
  const double p_hit = static_cast<double>(hits) / static_cast<double>(n);
  CHECK(std::abs(p_hit - 0.2) <
        3.0 * std::sqrt(0.2 * 0.8 / static_cast<double>(n)));
}

TEST_CASE("coordinate law validation") {
  CHECK_THROWS_AS(CoordinateLaw::gaussian_law(-1.0), limset::parameter_error);
  CHECK_THROWS_AS(CoordinateLaw::discrete_law({{-2.0, 0.1}}),
                  limset::parameter_error);
  CHECK_THROWS_AS(CoordinateLaw::discrete_law({{2.0, 0.6}}),
                  limset::parameter_error);  // symmetric mass 1.2 > 1
  CHECK_THROWS_AS(IndependentModel{std::vector<CoordinateLaw>{}},
                  limset::dimension_error);
}

// ---------------------------------------------------------------------------
// Heavy-tail ladder model

TEST_CASE("single-segment truncated covariance hits the worked value") {
  auto model = build_example8(single_segment_star(),
                              Example8Model::Mode::exact_log, 1);
  // |Z|-truncation at the anchor m_{1,1} = 81: the matrix is
  // log(81) e1 e1^T through both query paths.
  SymMatrix sym = model->trunc_cov_at_anchor(1, 1);
  CHECK(sym.at(0, 0) == doctest::Approx(std::log(81.0)).epsilon(1e-12));
  CHECK(sym.at(0, 1) == 0.0);
  CHECK(sym.at(1, 1) == 0.0);

  // double path: ln t = 81 captures exactly the same mass (sigma = 1)
  SymMatrix dbl = model->trunc_cov(81.0);
  CHECK(dbl.at(0, 0) == doctest::Approx(std::log(81.0)).epsilon(1e-12));
  CHECK(dbl.at(1, 1) == 0.0);

  // at the bottom anchor: H = 2 log 3 = log 9
  SymMatrix bottom = model->trunc_cov_at_anchor(1, 0);
  CHECK(bottom.at(0, 0) == doctest::Approx(std::log(9.0)).epsilon(1e-12));
  CHECK(model->trunc_cov(9.0).at(0, 0) ==
        doctest::Approx(std::log(9.0)).epsilon(1e-12));

  // below support the matrix is zero
  SymMatrix zero = model->trunc_cov(8.9);
  CHECK(zero.at(0, 0) == 0.0);
  CHECK(model->trunc_cov(-kInf).at(0, 0) == 0.0);

  // ln_H_at_anchor agrees with the ladder levels
  CHECK(std::exp(model->ln_H_at_anchor(1, 1)) ==
        doctest::Approx(std::log(81.0)).epsilon(1e-13));
}

TEST_CASE("two-segment star splits mass between windows") {
  auto model = build_example8(two_segment_star(),
                              Example8Model::Mode::exact_log, 1);
  REQUIRE(model->window_segments().size() == 2);
  CHECK(model->window_segments()[0].sigma == 1.0);
  CHECK(model->window_segments()[1].sigma == 0.8);

  // full capture: window 1 holds 4 log 3, the seam window 252 log 3
  SymMatrix full = model->trunc_cov_at_anchor(2, 0);
  CHECK(full.at(0, 0) == doctest::Approx(4.0 * kLn3).epsilon(1e-12));
  CHECK(full.at(1, 1) ==
        doctest::Approx(0.64 * 252.0 * kLn3).epsilon(1e-12));
  CHECK(full.at(0, 1) == 0.0);

  // the double path reaches the same matrix once ln t covers the seam atom
  const double ln_m2 = std::exp(model->ladder().ln_anchor_value(2));
  SymMatrix above = model->trunc_cov(ln_m2 * 1.01);
  CHECK(above.at(0, 0) == doctest::Approx(full.at(0, 0)).epsilon(1e-12));
  CHECK(above.at(1, 1) == doctest::Approx(full.at(1, 1)).epsilon(1e-9));
  // just below the seam atom the second window is still empty
  SymMatrix below = model->trunc_cov(ln_m2 * 0.99);
  CHECK(below.at(0, 0) == doctest::Approx(4.0 * kLn3).epsilon(1e-12));
  CHECK(below.at(1, 1) == 0.0);

  // monotone PSD increments across scales
  SymMatrix prev = model->trunc_cov(0.0);
  for (double ln_t : {9.0, 50.0, 81.0, 1e3, 1e50, ln_m2 * 1.5, kInf}) {
    SymMatrix cur = model->trunc_cov(ln_t);
    CHECK(min_eig_2x2(diff(cur, prev)) >= -1e-10);
    prev = cur;
  }
}

TEST_CASE("ladder model analytic delegates") {
  auto model = build_example8(single_segment_star(),
                              Example8Model::Mode::exact_log, 2);
  CHECK(model->q_of(10).is_zero());
  CHECK(model->q_of(9).ln_mag ==
        doctest::Approx(std::log(kLn3) - 18.0).epsilon(1e-13));
  CHECK(model->q_of(BlockPos{1, 0, 1}).ln_mag ==
        doctest::Approx(std::log(kLn3) - 162.0).epsilon(1e-13));
  CHECK(model->q_mass_bound(200).below_half);
  CHECK(model->q_mass_bound(0).below_half);
  for (const auto& check : model->verify_identities()) {
    INFO(check.name << ": " << check.detail);
    CHECK(check.pass);
  }
  // H envelope at the model level
  CHECK(model->ln_H(81.0) ==
        doctest::Approx(std::log(4.0 * kLn3)).epsilon(1e-13));
}

TEST_CASE("ladder epochs follow the level jumps") {
  auto model = build_example8(single_segment_star(),
                              Example8Model::Mode::exact_log, 1);
  CHECK(model->cov_epoch(40.0) == model->cov_epoch(50.0));
  CHECK(model->cov_epoch(40.0) != model->cov_epoch(81.5));
  CHECK(model->cov_epoch(5.0) != model->cov_epoch(40.0));
}

TEST_CASE("exact mode refuses to sample, scaled mode draws Z") {
  auto exact = build_example8(single_segment_star(),
                              Example8Model::Mode::exact_log, 1);
  CHECK(!exact->can_sample());
  RngStream rng(5u, 0u);
  double out[2];
  CHECK_THROWS_AS(exact->sample(rng, out), limset::capability_error);

  auto scaled = build_example8(single_segment_star(),
                               Example8Model::Mode::scaled, 1, 1.0);
  REQUIRE(scaled->can_sample());

  // P(Z = 0) within 3 SE of 1 - 2 sum q over 1e6 draws
  const double p_zero = 1.0 - 2.0 * scaled->q_mass_bound(4096).total;
  RngStream draw(2024u, 5u);
  const std::size_t n = 1000000;
  std::size_t zero_count = 0, xz_violations = 0;
  double z, x[2];
  for (std::size_t i = 0; i < n; ++i) {
    scaled->sample_zx(draw, &z, x);
    const double xn = std::sqrt(x[0] * x[0] + x[1] * x[1]);
    if (z == 0.0) ++zero_count;
    if (xn > std::abs(z) + 1e-12) ++xz_violations;
  }
  const double p_hat =
      static_cast<double>(zero_count) / static_cast<double>(n);
  const double se =
      std::sqrt(p_zero * (1.0 - p_zero) / static_cast<double>(n));
  CHECK(std::abs(p_hat - p_zero) <= 3.0 * se);
  CHECK(xz_violations == 0);  // |X| <= |Z| pointwise
}

TEST_CASE("scaled sampler determinism") {
  auto model = build_example8(two_segment_star(),
                              Example8Model::Mode::scaled, 2, 4.0);
  RngStream a(123u, 9u), b(123u, 9u);
  std::vector<double> batch_a = model->sample_batch(a, 256);
  std::vector<double> batch_b = model->sample_batch(b, 256);
  CHECK(batch_a == batch_b);
}

TEST_CASE("ladder tail bound dominates the jump masses") {
  auto model = build_example8(single_segment_star(),
                              Example8Model::Mode::exact_log, 1);
  // below the first atom everything survives: P(|X| > t) = P(Z != 0)
  const double p_nonzero = 2.0 * model->q_mass_bound(4096).enumerated;
  const double got = std::exp(model->ln_tail(8.0));
  CHECK(got >= p_nonzero * 0.999);
  CHECK(got <= p_nonzero * 1.01 + 1e-160);
  // between the atoms only the n = 81 atom remains
  const double q81 = kLn3 * std::exp(-162.0);
  CHECK(std::exp(model->ln_tail(30.0)) ==
        doctest::Approx(2.0 * q81).epsilon(1e-6));
  // far beyond every double-representable atom the bound is tiny
  CHECK(model->ln_tail(1000.0) < -1900.0);
  CHECK(model->ln_tail(kInf) == -kInf);
  // bounds are monotone nonincreasing in t
  CHECK(model->ln_tail(8.0) >= model->ln_tail(30.0));
  CHECK(model->ln_tail(30.0) >= model->ln_tail(200.0));
}

// ---------------------------------------------------------------------------
// Declarative configs

TEST_CASE("models build from JSON descriptors") {
  auto gauss = model_from_json(
      R"({"kind":"gaussian","cov":[[2.0,1.0],[1.0,2.0]]})");
  CHECK(gauss->kind() == "gaussian");
  CHECK(gauss->dim() == 2);
  CHECK(gauss->trunc_cov(kInf).at(0, 1) == doctest::Approx(1.0));

  auto indep = model_from_json(
      R"({"kind":"independent_components","coordinate_laws":[
            {"law":"gaussian","sigma":1.0},
            {"law":"discrete_symmetric","atoms":[{"value":2.0,"prob":0.1}]},
            {"law":"zero"}]})");
  CHECK(indep->kind() == "independent_components");
  CHECK(indep->dim() == 3);

  auto exact = model_from_json(
      R"({"kind":"example8_exact",
          "star_set":{"segments":[{"sigma":1.0,"z":[1.0,0.0]}]},
          "k_max":1})");
  CHECK(exact->kind() == "example8_exact");
  CHECK(!exact->can_sample());
  CHECK(exact->trunc_cov(81.0).at(0, 0) ==
        doctest::Approx(std::log(81.0)).epsilon(1e-12));

  auto scaled = model_from_json(
      R"({"kind":"example8_scaled",
          "star_set":{"segments":[{"sigma":1.0,"z":[0.6,0.8]}]},
          "k_max":2,"kappa":3.0})");
  CHECK(scaled->kind() == "example8_scaled");
  CHECK(scaled->can_sample());

  StarSet star = star_from_json(
      R"({"segments":[{"sigma":1.0,"z":[0.6,0.8]}]})");
  CHECK(star.dim() == 2);
  CHECK(star.segments()[0].z[0] == doctest::Approx(0.6));
}

TEST_CASE("config errors carry the config category") {
  CHECK_THROWS_AS(model_from_json("not json"), limset::config_error);
  CHECK_THROWS_AS(model_from_json(R"({"kind":"mystery"})"),
                  limset::config_error);
  CHECK_THROWS_AS(model_from_json(R"({"kind":"gaussian"})"),
                  limset::config_error);
  CHECK_THROWS_AS(
      model_from_json(R"({"kind":"gaussian","cov":[[1.0,0.0]]})"),
      limset::config_error);
  CHECK_THROWS_AS(star_from_json(R"({"segments":[]})"),
                  limset::parameter_error);
  // structurally valid JSON with an indefinite matrix -> parameter error
  CHECK_THROWS_AS(
      model_from_json(R"({"kind":"gaussian","cov":[[1.0,2.0],[2.0,1.0]]})"),
      limset::parameter_error);
}
