#include "limset/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

#include "limset/errors.hpp"
#include "limset/taut_string.hpp"

namespace limset {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

void check_criteria_config(const CriteriaConfig& cfg) {
  if (cfg.epsilons.empty())
    throw parameter_error("criteria: epsilon sweep must not be empty");
  for (double e : cfg.epsilons)
    if (!std::isfinite(e) || e <= 0.0)
      throw parameter_error("criteria: epsilons must be finite and > 0");
  if (!(cfg.alpha_hi > 0.0) || !std::isfinite(cfg.alpha_hi))
    throw parameter_error("criteria: alpha_hi must be finite and > 0");
  if (!(cfg.alpha_step > 0.0) || cfg.alpha_step > cfg.alpha_hi)
    throw parameter_error("criteria: alpha_step must lie in (0, alpha_hi]");
  if (cfg.refine_rounds < 0)
    throw parameter_error("criteria: refine_rounds must be >= 0");
}

// ln of c_n^2 / (2n), the scale factor every exponent shares.
double ln_rate_base(const NormalizerSeq& seq, double ln_n) {
  return seq.ln_rate(ln_n);
}

SeriesClass classify_scaled(const SeriesGrid& grid, const std::vector<double>& ln_rate,
                            double alpha, const SeriesConfig& scfg) {
  std::vector<double> e(grid.size());
  if (alpha == 0.0) {
    // Zero scale: the exponent vanishes identically (its numerator is
    // alpha^2 c_n^2, zero before any division by H can blow it up).
    std::fill(e.begin(), e.end(), 0.0);
  } else {
    double ln_a2 = 2.0 * std::log(alpha);
    for (std::size_t j = 0; j < grid.size(); ++j) e[j] = std::exp(ln_a2 + ln_rate[j]);
  }
  return classify_exponents(grid, e, scfg).cls;
}

// Coarse scan for the Divergent->Convergent flip in alpha, then bisection
// on each boundary. The result brackets the flip: lo is the largest scale
// still Divergent, hi the smallest already Convergent.
AlphaBracket locate_boundary(const std::function<SeriesClass(double)>& classify,
                             const CriteriaConfig& cfg) {
  std::vector<double> alphas;
  std::vector<SeriesClass> cls;
  for (double a = 0.0; a <= cfg.alpha_hi + 1e-12; a += cfg.alpha_step) {
    alphas.push_back(a);
    cls.push_back(classify(a));
  }

  std::size_t first_c = alphas.size();
  for (std::size_t i = 0; i < alphas.size(); ++i)
    if (cls[i] == SeriesClass::convergent) {
      first_c = i;
      break;
    }
  if (first_c == alphas.size()) {
    std::ostringstream os;
    os << "alpha boundary: no Convergent scale up to alpha_hi=" << cfg.alpha_hi
       << "; the normalizer is too weak for this model (or raise alpha_hi)";
    throw parameter_error(os.str());
  }

  std::size_t last_d = alphas.size();
  for (std::size_t i = 0; i < first_c; ++i)
    if (cls[i] == SeriesClass::divergent) last_d = i;
  if (last_d == alphas.size()) {
    std::ostringstream os;
    os << "alpha boundary: Undecided at every scale below the first Convergent one"
       << " (first Convergent alpha=" << alphas[first_c] << ")";
    throw parameter_error(os.str());
  }

  // Refine sup{alpha: Divergent} upward within (last D, next scanned point].
  double d_lo = alphas[last_d];
  double d_hi = (last_d + 1 < alphas.size()) ? alphas[last_d + 1] : cfg.alpha_hi;
  for (int r = 0; r < cfg.refine_rounds; ++r) {
    double mid = 0.5 * (d_lo + d_hi);
    if (classify(mid) == SeriesClass::divergent)
      d_lo = mid;
    else
      d_hi = mid;
  }

  // Refine inf{alpha: Convergent} downward, not past the Divergent edge.
  double c_hi = alphas[first_c];
  double c_lo = std::max(d_lo, (first_c > 0) ? alphas[first_c - 1] : 0.0);
  for (int r = 0; r < cfg.refine_rounds; ++r) {
    double mid = 0.5 * (c_lo + c_hi);
    if (classify(mid) == SeriesClass::convergent)
      c_hi = mid;
    else
      c_lo = mid;
  }

  AlphaBracket out;
  out.lo = d_lo;
  out.hi = c_hi;
  out.alpha0 = 0.5 * (d_lo + c_hi);
  return out;
}

// Per-block scale data shared by every membership/alpha query.
struct BlockTable {
  SeriesGrid grid;
  std::vector<double> ln_c;  // ln c_n at each grid point
  std::vector<double> rate;  // c_n^2 / (2n), +inf when it overflows
};

BlockTable make_block_table(const NormalizerSeq& seq, const SeriesConfig& scfg) {
  BlockTable t;
  t.grid = make_series_grid(scfg);
  t.ln_c.reserve(t.grid.size());
  t.rate.reserve(t.grid.size());
  for (double ln_n : t.grid.ln_n) {
    t.ln_c.push_back(seq.ln_c(ln_n));
    t.rate.push_back(std::exp(seq.ln_rate(ln_n)));
  }
  return t;
}

// Directional data at one covariance epoch: the eigensystem plus the
// query's per-direction sizes (a) and zero-direction guards.
struct DirData {
  EigenSystem sys;
  std::vector<double> a;      // |<u_i, x>| or I(<u_i, f>)^{1/2}
  std::vector<double> guard;  // |<u_i, x>| or sup |<u_i, f>|
};

double block_exponent(const DirData& dd, double rate, double eps) {
  for (int i = dd.sys.rank; i < dd.sys.d; ++i)
    if (dd.guard[i] >= eps) return kInf;  // sticks out of the eigenspace
  double e = 0.0;
  for (int i = 0; i < dd.sys.rank; ++i) {
    double w = dd.a[i] - eps;
    if (w > 0.0) e += w * w * rate / dd.sys.values[i];
  }
  return e;
}

MembershipVerdict assemble_verdict(std::vector<double> eps_sorted,
                                   const std::vector<SeriesVerdict>& raw) {
  MembershipVerdict out;
  std::size_t m = eps_sorted.size();
  out.per_epsilon.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    out.per_epsilon[i].epsilon = eps_sorted[i];
    out.per_epsilon[i].raw = raw[i].cls;
    out.per_epsilon[i].fitted_s = raw[i].fitted_s;
  }
  // Monotone closure, smallest epsilon upward: once Divergent, Divergent
  // at every larger radius.
  bool carry = false;
  for (std::size_t i = m; i-- > 0;) {
    SeriesClass c = out.per_epsilon[i].raw;
    if (carry && c != SeriesClass::divergent) {
      c = SeriesClass::divergent;
      out.closure_applied = true;
    }
    if (c == SeriesClass::divergent) carry = true;
    out.per_epsilon[i].cls = c;
  }

  bool any_convergent = false, all_divergent = true;
  for (const auto& v : out.per_epsilon) {
    if (v.raw == SeriesClass::convergent) any_convergent = true;
    if (v.raw != SeriesClass::divergent) all_divergent = false;
  }
  if (all_divergent)
    out.status = Membership::member;
  else if (any_convergent)
    out.status = Membership::non_member;
  else
    out.status = Membership::undecided;

  out.flip_epsilon = kNan;
  for (std::size_t i = m; i-- > 0;)
    if (out.per_epsilon[i].cls == SeriesClass::divergent) {
      out.flip_epsilon = out.per_epsilon[i].epsilon;
      break;
    }
  return out;
}

std::vector<double> sorted_epsilons(const CriteriaConfig& cfg) {
  std::vector<double> eps = cfg.epsilons;
  std::sort(eps.begin(), eps.end(), std::greater<double>());
  return eps;
}

}  // namespace

const char* to_string(Membership m) {
  switch (m) {
    case Membership::member: return "member";
    case Membership::non_member: return "non-member";
    case Membership::undecided: return "undecided";
  }
  return "?";
}

EigenSystem eigensystem_at(const MomentModel& model, double ln_t) {
  return eigen_decompose(model.trunc_cov(ln_t));
}

AlphaBracket alpha0(const MomentModel& model, const NormalizerSeq& seq,
                    const CriteriaConfig& cfg) {
  check_criteria_config(cfg);
  SeriesGrid grid = make_series_grid(cfg.series);
  std::vector<double> ln_rate;
  ln_rate.reserve(grid.size());
  for (double ln_n : grid.ln_n) {
    double lc = seq.ln_c(ln_n);
    ln_rate.push_back(seq.ln_rate(ln_n) - model.ln_H(lc));
  }
  return locate_boundary(
      [&](double a) { return classify_scaled(grid, ln_rate, a, cfg.series); }, cfg);
}

std::vector<AlphaBracket> coordinate_alphas(const MomentModel& model,
                                            const NormalizerSeq& seq,
                                            const CriteriaConfig& cfg) {
  check_criteria_config(cfg);
  SeriesGrid grid = make_series_grid(cfg.series);
  std::vector<double> ln_c;
  ln_c.reserve(grid.size());
  for (double ln_n : grid.ln_n) ln_c.push_back(seq.ln_c(ln_n));

  std::vector<AlphaBracket> out;
  for (int i = 0; i < model.dim(); ++i) {
    std::vector<double> ln_rate(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) {
      double var = model.coord_trunc_var(i, ln_c[j]);
      ln_rate[j] = seq.ln_rate(grid.ln_n[j]) - std::log(var);
    }
    out.push_back(locate_boundary(
        [&](double a) { return classify_scaled(grid, ln_rate, a, cfg.series); }, cfg));
  }
  return out;
}

MembershipVerdict point_membership(const std::vector<double>& x,
                                   const MomentModel& model,
                                   const NormalizerSeq& seq,
                                   const CriteriaConfig& cfg) {
  check_criteria_config(cfg);
  if (static_cast<int>(x.size()) != model.dim())
    throw dimension_error("point_membership: query dimension must match the model");
  for (double v : x)
    if (!std::isfinite(v)) throw parameter_error("point_membership: query must be finite");

  BlockTable t = make_block_table(seq, cfg.series);
  std::map<std::size_t, DirData> cache;
  auto dir_at = [&](std::size_t j) -> const DirData& {
    std::size_t key = model.cov_epoch(t.ln_c[j]);
    auto it = cache.find(key);
    if (it == cache.end()) {
      DirData dd;
      dd.sys = eigen_decompose(model.trunc_cov(t.ln_c[j]));
      dd.a.resize(dd.sys.d);
      for (int i = 0; i < dd.sys.d; ++i) dd.a[i] = std::fabs(dd.sys.project(i, x));
      dd.guard = dd.a;
      it = cache.emplace(key, std::move(dd)).first;
    }
    return it->second;
  };

  std::vector<double> eps = sorted_epsilons(cfg);
  std::vector<SeriesVerdict> raw;
  raw.reserve(eps.size());
  std::vector<double> e(t.grid.size());
  for (double ep : eps) {
    for (std::size_t j = 0; j < t.grid.size(); ++j)
      e[j] = block_exponent(dir_at(j), t.rate[j], ep);
    raw.push_back(classify_exponents(t.grid, e, cfg.series));
  }
  return assemble_verdict(std::move(eps), raw);
}

MembershipVerdict function_membership(const GridFn& f, const MomentModel& model,
                                      const NormalizerSeq& seq,
                                      const CriteriaConfig& cfg) {
  check_criteria_config(cfg);
  if (f.dim() != model.dim())
    throw dimension_error("function_membership: path dimension must match the model");
  f.validate();

  BlockTable t = make_block_table(seq, cfg.series);
  std::vector<double> eps = sorted_epsilons(cfg);
  std::vector<SeriesVerdict> raw;
  raw.reserve(eps.size());
  std::vector<double> e(t.grid.size());

  if (model.kind() == "independent_components") {
    // Coordinates decouple: the exponent sums (I(f_i)^{1/2} - eps)_+^2
    // against the coordinate truncated variances, over all coordinates.
    int d = model.dim();
    std::vector<double> root_energy(d);
    for (int i = 0; i < d; ++i)
      root_energy[i] = std::sqrt(dirichlet_energy(f.component(i)));

    for (double ep : eps) {
      for (std::size_t j = 0; j < t.grid.size(); ++j) {
        double sum = 0.0;
        for (int i = 0; i < d; ++i) {
          double w = root_energy[i] - ep;
          if (w <= 0.0) continue;
          double var = model.coord_trunc_var(i, t.ln_c[j]);
          sum += w * w * t.rate[j] / var;  // var == 0 pushes the block out
        }
        e[j] = sum;
      }
      raw.push_back(classify_exponents(t.grid, e, cfg.series));
    }
    return assemble_verdict(std::move(eps), raw);
  }

  std::map<std::size_t, DirData> cache;
  auto dir_at = [&](std::size_t j) -> const DirData& {
    std::size_t key = model.cov_epoch(t.ln_c[j]);
    auto it = cache.find(key);
    if (it == cache.end()) {
      DirData dd;
      dd.sys = eigen_decompose(model.trunc_cov(t.ln_c[j]));
      dd.a.resize(dd.sys.d);
      dd.guard.resize(dd.sys.d);
      for (int i = 0; i < dd.sys.d; ++i) {
        std::vector<double> u(dd.sys.d);
        for (int c = 0; c < dd.sys.d; ++c) u[c] = dd.sys.vector_at(i, c);
        GridFn proj = project_direction(f, u);
        dd.a[i] = std::sqrt(dirichlet_energy(proj));
        dd.guard[i] = proj.sup_norm();
      }
      it = cache.emplace(key, std::move(dd)).first;
    }
    return it->second;
  };

  for (double ep : eps) {
    for (std::size_t j = 0; j < t.grid.size(); ++j)
      e[j] = block_exponent(dir_at(j), t.rate[j], ep);
    raw.push_back(classify_exponents(t.grid, e, cfg.series));
  }
  return assemble_verdict(std::move(eps), raw);
}

PredictedSets predicted_sets(const MomentModel& model, const NormalizerSeq& seq,
                             const CriteriaConfig& cfg) {
  PredictedSets out;
  out.alpha = alpha0(model, seq, cfg);
  out.coordinate = coordinate_alphas(model, seq, cfg);

  int d = model.dim();
  auto push = [&](std::vector<double> p) { out.a_points.push_back(std::move(p)); };

  if (const auto* ex = dynamic_cast<const Example8Model*>(&model)) {
    // Star-shaped limit: segment endpoints and midpoints, at the fitted
    // global scale.
    double a0 = out.alpha.alpha0;
    for (const auto& seg : ex->star().segments()) {
      for (double s : {1.0, 0.5, -0.5, -1.0}) {
        std::vector<double> p(d);
        for (int c = 0; c < d; ++c) p[c] = s * a0 * seg.sigma * seg.z[c];
        push(std::move(p));
      }
    }
    return out;
  }

  if (const auto* g = dynamic_cast<const GaussianModel*>(&model)) {
    EigenSystem sys = eigen_decompose(g->cov());
    double a0 = out.alpha.alpha0;
    for (int i = 0; i < sys.rank; ++i) {
      double scale = a0 * std::sqrt(sys.values[i]);
      for (double s : {1.0, -1.0}) {
        std::vector<double> p(d);
        for (int c = 0; c < d; ++c) p[c] = s * scale * sys.vector_at(i, c);
        push(std::move(p));
      }
    }
    if (d == 2 && sys.rank == 2) {
      // Ellipse ring: image of 16 unit directions under the covariance
      // square root.
      for (int k = 0; k < 16; ++k) {
        double th = 2.0 * M_PI * k / 16;
        double u0 = std::cos(th), u1 = std::sin(th);
        std::vector<double> p(2, 0.0);
        for (int i = 0; i < 2; ++i) {
          double w = std::sqrt(sys.values[i]) *
                     (sys.vector_at(i, 0) * u0 + sys.vector_at(i, 1) * u1);
          p[0] += a0 * w * sys.vector_at(i, 0);
          p[1] += a0 * w * sys.vector_at(i, 1);
        }
        push(std::move(p));
      }
    }
    return out;
  }

  // Independent components (or anything else): per-coordinate extremes.
  for (int i = 0; i < d; ++i) {
    for (double s : {1.0, -1.0}) {
      std::vector<double> p(d, 0.0);
      p[i] = s * out.coordinate[i].alpha0;
      push(std::move(p));
    }
  }
  return out;
}

}  // namespace limset
