#include <doctest.h>

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "limset/errors.hpp"
#include "limset/normalizer.hpp"

using limset::NormalizerSeq;
using limset::normalizer_from_json;

namespace {

bool item_pass(const std::vector<NormalizerSeq::CheckItem>& items, const std::string& name) {
  for (const auto& it : items)
    if (it.name.rfind(name, 0) == 0) return it.pass;
  FAIL("check item not found: ", name);
  return false;
}

}  // namespace

TEST_CASE("normalizer: closed forms") {
  NormalizerSeq hw = NormalizerSeq::sqrt_2n_loglog();
  double ln_n = std::log(100.0);
  // c_100 = sqrt(2 * 100 * log log 100)
  double want = 0.5 * std::log(2.0 * 100.0 * std::log(std::log(100.0)));
  CHECK(hw.ln_c(ln_n) == doctest::Approx(want).epsilon(1e-12));
  CHECK(hw.family() == "sqrt_2n_loglog");
  CHECK(hw.power() == doctest::Approx(0.5));

  NormalizerSeq p1 = NormalizerSeq::sqrt_2n_loglog_pow(1.0);
  double want1 = 0.5 * std::log(200.0) + std::log(std::log(std::log(100.0)));
  CHECK(p1.ln_c(ln_n) == doctest::Approx(want1).epsilon(1e-12));
  CHECK(p1.family() == "sqrt_2n_loglog_pow");

  // the two families agree at p = 1/2
  NormalizerSeq half = NormalizerSeq::sqrt_2n_loglog_pow(0.5);
  CHECK(half.ln_c(7.7) == doctest::Approx(hw.ln_c(7.7)).epsilon(1e-14));

  auto r = hw.ln_range();
  CHECK(r.first == doctest::Approx(std::log(3.0)));
  CHECK(std::isinf(r.second));
}

TEST_CASE("normalizer: block rate keeps the iterated log at extreme counts") {
  // ln(c^2/(2n)) = ln log log n sits far below the ulp of ln n out here, so
  // it must come from the closed form, never from subtracting ln-scale terms
  NormalizerSeq hw = NormalizerSeq::sqrt_2n_loglog();
  CHECK(hw.ln_rate(1e300) == doctest::Approx(std::log(std::log(1e300))).epsilon(1e-14));
  CHECK(hw.ln_rate(std::log(100.0)) ==
        doctest::Approx(std::log(std::log(std::log(100.0)))).epsilon(1e-12));

  NormalizerSeq p1 = NormalizerSeq::sqrt_2n_loglog_pow(1.0);
  CHECK(p1.ln_rate(1e300) == doctest::Approx(2.0 * std::log(std::log(1e300))).epsilon(1e-14));

  // a tabulated c_n = sqrt(2n) has rate exactly 1 across the whole range
  NormalizerSeq flat = NormalizerSeq::custom(
      {{1.05, 0.5 * (M_LN2 + 1.05)}, {1e300, 0.5 * (M_LN2 + 1e300)}});
  CHECK(flat.ln_rate(1.05) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(flat.ln_rate(5e299) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(flat.ln_rate(1e300) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("normalizer: closed-form guards") {
  NormalizerSeq hw = NormalizerSeq::sqrt_2n_loglog();
  CHECK_THROWS_AS(hw.ln_c(1.0), limset::parameter_error);   // log log n = 0
  CHECK_THROWS_AS(hw.ln_c(0.5), limset::parameter_error);
  CHECK_THROWS_AS(hw.ln_c(std::numeric_limits<double>::quiet_NaN()),
                  limset::parameter_error);
  CHECK_THROWS_AS(NormalizerSeq::sqrt_2n_loglog_pow(-1.0), limset::parameter_error);
  CHECK_THROWS_AS(NormalizerSeq::sqrt_2n_loglog_pow(
                      std::numeric_limits<double>::infinity()),
                  limset::parameter_error);
}

TEST_CASE("normalizer: custom table interpolation and range") {
  NormalizerSeq c = NormalizerSeq::custom({{2.0, 1.0}, {4.0, 2.0}, {8.0, 6.0}});
  CHECK(c.ln_c(2.0) == doctest::Approx(1.0));
  CHECK(c.ln_c(3.0) == doctest::Approx(1.5));
  CHECK(c.ln_c(4.0) == doctest::Approx(2.0));
  CHECK(c.ln_c(6.0) == doctest::Approx(4.0));
  CHECK(c.ln_c(8.0) == doctest::Approx(6.0));
  CHECK(std::isnan(c.power()));
  CHECK(c.ln_range().first == doctest::Approx(2.0));
  CHECK(c.ln_range().second == doctest::Approx(8.0));
  CHECK_THROWS_AS(c.ln_c(1.9), limset::parameter_error);
  CHECK_THROWS_AS(c.ln_c(8.1), limset::parameter_error);
}

TEST_CASE("normalizer: custom table validation") {
  using Row = std::pair<double, double>;
  CHECK_THROWS_AS(NormalizerSeq::custom({Row{2.0, 1.0}}), limset::parameter_error);
  CHECK_THROWS_AS(NormalizerSeq::custom({Row{2.0, 1.0}, Row{2.0, 1.5}}),
                  limset::parameter_error);
  CHECK_THROWS_AS(NormalizerSeq::custom({Row{4.0, 1.0}, Row{2.0, 0.5}}),
                  limset::parameter_error);
  CHECK_THROWS_AS(
      NormalizerSeq::custom({Row{2.0, std::numeric_limits<double>::quiet_NaN()},
                             Row{4.0, 1.0}}),
      limset::parameter_error);
}

TEST_CASE("normalizer checks: loglog families pass on a desk range") {
  for (double p : {0.5, 1.0, 2.0}) {
    auto items = NormalizerSeq::sqrt_2n_loglog_pow(p).validate(std::log(10.0),
                                                               std::log(1e6));
    CHECK(item_pass(items, "growth"));
    CHECK(item_pass(items, "regularity(eps=0.5)"));
    CHECK(item_pass(items, "regularity(eps=0.1)"));
    CHECK(item_pass(items, "regularity(eps=0.01)"));
    for (const auto& it : items) CHECK(!it.detail.empty());
  }
}

TEST_CASE("normalizer checks: c_n = sqrt(n) fails the growth requirement") {
  // tabulated ln c = ln n / 2 over a wide range
  NormalizerSeq root = NormalizerSeq::custom({{1.2, 0.6}, {700.0, 350.0}});
  auto items = root.validate(1.2, 700.0);
  CHECK(!item_pass(items, "growth"));
  // ratio regularity is fine for sqrt(n) itself
  CHECK(item_pass(items, "regularity(eps=0.5)"));
  CHECK(item_pass(items, "regularity(eps=0.01)"));
}

TEST_CASE("normalizer checks: decreasing ratio is flagged with a witness") {
  NormalizerSeq dip =
      NormalizerSeq::custom({{2.0, 1.6}, {5.0, 2.5}, {10.0, 5.2}});
  auto items = dip.validate(2.0, 10.0);
  REQUIRE(!items.empty());
  CHECK(!item_pass(items, "growth"));
  for (const auto& it : items)
    if (it.name == "growth") CHECK(it.detail.find("decreases between") != std::string::npos);
}

TEST_CASE("normalizer checks: superlinear growth fails regularity") {
  // c_n = n^{3/2}: c_n/c_m = (n/m)^{3/2} outruns (1+eps) n/m for every start
  NormalizerSeq steep = NormalizerSeq::custom({{1.2, 1.8}, {40.0, 60.0}});
  auto items = steep.validate(1.2, 40.0);
  CHECK(item_pass(items, "growth"));
  CHECK(!item_pass(items, "regularity(eps=0.5)"));
  CHECK(!item_pass(items, "regularity(eps=0.01)"));
}

TEST_CASE("normalizer checks: validation range errors") {
  NormalizerSeq hw = NormalizerSeq::sqrt_2n_loglog();
  CHECK_THROWS_AS(hw.validate(5.0, 5.0), limset::parameter_error);
  CHECK_THROWS_AS(hw.validate(7.0, 3.0), limset::parameter_error);
  NormalizerSeq c = NormalizerSeq::custom({{2.0, 1.0}, {4.0, 2.0}});
  CHECK_THROWS_AS(c.validate(5.0, 9.0), limset::parameter_error);  // disjoint
}

TEST_CASE("normalizer: json builders") {
  NormalizerSeq hw = normalizer_from_json(R"({"family":"sqrt_2n_loglog"})");
  CHECK(hw.family() == "sqrt_2n_loglog");

  NormalizerSeq p2 =
      normalizer_from_json(R"({"family":"sqrt_2n_loglog_pow","p":2.0})");
  CHECK(p2.power() == doctest::Approx(2.0));

  NormalizerSeq c = normalizer_from_json(
      R"({"family":"custom","ln_table":[[2.0,1.0],[4.0,2.0]]})");
  CHECK(c.ln_c(3.0) == doctest::Approx(1.5));

  CHECK_THROWS_AS(normalizer_from_json("not json"), limset::config_error);
  CHECK_THROWS_AS(normalizer_from_json(R"({"family":"nope"})"), limset::config_error);
  CHECK_THROWS_AS(normalizer_from_json(R"({"family":"sqrt_2n_loglog_pow"})"),
                  limset::config_error);
  CHECK_THROWS_AS(
      normalizer_from_json(R"({"family":"custom","ln_table":[[2.0],[4.0,2.0]]})"),
      limset::config_error);
}
