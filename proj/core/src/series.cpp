#include "limset/series.hpp"

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>

#include "limset/errors.hpp"

namespace limset {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

void check_config(const SeriesConfig& cfg) {
  if (!(cfg.rho > 1.0) || !std::isfinite(cfg.rho))
    throw parameter_error("series: growth factor rho must be finite and > 1");
  if (cfg.blocks < 2)
    throw parameter_error("series: need at least 2 blocks");
  if (!(cfg.margin > 0.0) || !(cfg.margin < 1.0))
    throw parameter_error("series: margin must lie in (0, 1)");
  if (!(cfg.ln_n_cap > std::log(3.0)))
    throw parameter_error("series: ln_n_cap must exceed ln 3");
}

}  // namespace

const char* to_string(SeriesClass c) {
  switch (c) {
    case SeriesClass::divergent: return "Divergent";
    case SeriesClass::convergent: return "Convergent";
    case SeriesClass::undecided: return "Undecided";
  }
  return "?";
}

SeriesGrid make_series_grid(const SeriesConfig& cfg) {
  check_config(cfg);
  SeriesGrid g;

  // Phase 1: integer counts n_k = ceil(rho^k), deduplicated, from n = 3
  // (the first n with ln ln n > 0).
  double prev_n = 0.0;
  for (int k = 1; static_cast<int>(g.ln_n.size()) < cfg.blocks; ++k) {
    double v = std::pow(cfg.rho, k);
    if (!std::isfinite(v)) break;
    double n = std::ceil(v);
    if (n < 3.0 || n <= prev_n) continue;
    double ln_n = std::log(n);
    if (ln_n >= cfg.ln_n_cap) break;
    g.ln_n.push_back(ln_n);
    prev_n = n;
  }
  if (g.ln_n.empty())
    throw parameter_error("series: grid is empty; raise ln_n_cap");

  // Phase 2: fixed-factor growth in x = ln ln n up to the cap. The
  // multiplicative step keeps the relative x-resolution constant, so
  // features near the phase boundary are sampled as faithfully as the
  // far tail, while n itself is carried only through its logarithm.
  double x_last = std::log(g.ln_n.back());
  double x_cap = std::log(cfg.ln_n_cap);
  if (x_cap > x_last) {
    double ln_r = std::log(x_cap / x_last) / cfg.blocks;
    for (int j = 1; j <= cfg.blocks; ++j) {
      double x = (j == cfg.blocks) ? x_cap : x_last * std::exp(ln_r * j);
      g.ln_n.push_back(std::exp(x));
    }
  }

  g.x.reserve(g.ln_n.size());
  for (double ln_n : g.ln_n) g.x.push_back(std::log(ln_n));
  g.ln_width.reserve(g.ln_n.size() - 1);
  for (std::size_t j = 0; j + 1 < g.ln_n.size(); ++j)
    g.ln_width.push_back(std::log(g.ln_n[j + 1] - g.ln_n[j]));
  return g;
}

SeriesVerdict classify_exponents(const SeriesGrid& grid,
                                 const std::vector<double>& exponents,
                                 const SeriesConfig& cfg) {
  check_config(cfg);
  if (grid.size() < 2) throw parameter_error("series: grid needs at least 2 points");
  if (exponents.size() != grid.size())
    throw dimension_error("series: exponent count must match grid size");

  SeriesVerdict out;
  out.margin = cfg.margin;

  std::vector<double> xs, es;  // finite-exponent points, ascending x
  xs.reserve(grid.size());
  es.reserve(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    double e = exponents[j];
    if (std::isnan(e) || e < 0.0)
      throw parameter_error("series: exponents must be >= 0 (NaN or negative seen)");
    if (std::isinf(e)) continue;  // block carries no mass
    xs.push_back(grid.x[j]);
    es.push_back(e);
  }
  out.blocks_used = xs.size();

  out.ln_block_mass.reserve(grid.size() - 1);
  for (std::size_t j = 0; j + 1 < grid.size(); ++j)
    out.ln_block_mass.push_back(std::isinf(exponents[j]) ? -kInf
                                                         : grid.ln_width[j] - exponents[j]);

  if (xs.empty()) {
    out.cls = SeriesClass::convergent;  // nothing left of the series
    out.fitted_s = kInf;
    return out;
  }
  if (xs.size() == 1) {
    out.cls = SeriesClass::undecided;  // a single block has no trend
    out.fitted_s = kNan;
    return out;
  }

  // Lower convex hull of (x, e). The cheapest exponents trace the
  // envelope that decides divergence; points above it (truncation
  // plateaus, inflated small-n corrections) never touch the hull.
  // Long-double products keep the turn test exact-enough when
  // exponents approach the double range.
  std::vector<std::size_t> hull;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    while (hull.size() >= 2) {
      std::size_t a = hull[hull.size() - 2], b = hull.back();
      long double lhs = (static_cast<long double>(es[b]) - es[a]) *
                        (static_cast<long double>(xs[i]) - xs[b]);
      long double rhs = (static_cast<long double>(es[i]) - es[b]) *
                        (static_cast<long double>(xs[b]) - xs[a]);
      if (lhs >= rhs)
        hull.pop_back();  // middle point is not below the chord
      else
        break;
    }
    hull.push_back(i);
  }

  // The dominant trend is the hull edge spanning the widest stretch of
  // x; short terminal ascents (a frozen truncation level turning the
  // tail convex) cannot outweigh it. Ties go to the later edge.
  double best_span = -1.0;
  double best_slope = kNan;
  for (std::size_t k = 0; k + 1 < hull.size(); ++k) {
    std::size_t a = hull[k], b = hull[k + 1];
    double span = xs[b] - xs[a];
    if (span >= best_span) {
      best_span = span;
      best_slope = static_cast<double>(
          (static_cast<long double>(es[b]) - es[a]) / (static_cast<long double>(xs[b]) - xs[a]));
    }
  }
  out.fitted_s = best_slope;

  if (std::isnan(best_slope))
    out.cls = SeriesClass::undecided;
  else if (best_slope <= 1.0 - cfg.margin)
    out.cls = SeriesClass::divergent;
  else if (best_slope >= 1.0 + cfg.margin)
    out.cls = SeriesClass::convergent;
  else
    out.cls = SeriesClass::undecided;
  return out;
}

SeriesVerdict series_classify(const std::function<double(double)>& exponent_at_ln_n,
                              const SeriesConfig& cfg) {
  if (!exponent_at_ln_n) throw parameter_error("series: exponent callback is empty");
  SeriesGrid grid = make_series_grid(cfg);
  std::vector<double> e;
  e.reserve(grid.size());
  for (double ln_n : grid.ln_n) e.push_back(exponent_at_ln_n(ln_n));
  return classify_exponents(grid, e, cfg);
}

}  // namespace limset
