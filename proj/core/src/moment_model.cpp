#include "limset/moment_model.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <functional>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "limset/errors.hpp"

namespace limset {

namespace {

const double kNegInf = -std::numeric_limits<double>::infinity();
const double kInf = std::numeric_limits<double>::infinity();

// Jump positions past this cannot carry double-representable mass; must
// match the enumeration horizon used when the ladder collects its jumps.
constexpr double kJumpHorizon = 400.0;

double ln_erfc(double z) {
  if (z <= 25.0) return std::log(std::erfc(z));
  // Asymptotic expansion; relative error < 1e-29 from here on.
  const double zz = z * z;
  return -zz - std::log(z) - 0.5 * std::log(M_PI) +
         std::log1p(-0.5 / zz + 0.75 / (zz * zz));
}

// E[y^2 1{|y| <= a}] for a standard normal y.
double std_normal_trunc_second(double a) {
  if (a <= 0.0) return 0.0;
  if (!std::isfinite(a)) return 1.0;
  return std::erf(a / M_SQRT2) -
         a * std::sqrt(2.0 / M_PI) * std::exp(-0.5 * a * a);
}

// P(|y| <= a) for a standard normal y.
double std_normal_box(double a) {
  if (a <= 0.0) return 0.0;
  if (!std::isfinite(a)) return 1.0;
  return std::erf(a / M_SQRT2);
}

double simpson_rec(const std::function<double(double)>& f, double a,
                   double m, double b, double fa, double fm, double fb,
                   double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return simpson_rec(f, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_rec(f, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol) {
  if (!(b > a)) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_rec(f, a, m, b, fa, fm, fb, whole, tol, 28);
}

std::size_t hash_mix(std::size_t h, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, sizeof bits);
  h ^= bits;
  h *= 1099511628211ULL;  // FNV-1a step
  return h;
}

std::size_t geometric_epoch(double ln_t, double ln_cutoff) {
  if (ln_t >= ln_cutoff) return 0;  // covariance constant past the cutoff
  if (!std::isfinite(ln_t)) return std::numeric_limits<std::size_t>::max();
  const double below = ln_cutoff - ln_t;
  const double bucket = std::floor(below / std::log(1.02));
  if (bucket >= 9e18) return std::numeric_limits<std::size_t>::max();
  return 1 + static_cast<std::size_t>(bucket);
}

}  // namespace

std::vector<double> MomentModel::sample_batch(RngStream& rng,
                                              std::size_t count) const {
  const int d = dim();
  std::vector<double> out(count * static_cast<std::size_t>(d));
  for (std::size_t i = 0; i < count; ++i)
    sample(rng, out.data() + i * static_cast<std::size_t>(d));
  return out;
}

// ---------------------------------------------------------------------------
// Gaussian

GaussianModel::GaussianModel(SymMatrix cov) : cov_(std::move(cov)) {
  spec_ = eigen_decompose(cov_);
  // Reject covariances that are not PSD: the clamped reconstruction must
  // reproduce the input.
  double scale = 0.0;
  for (double v : cov_.a) scale = std::max(scale, std::abs(v));
  SymMatrix rebuilt(cov_.d);
  for (int i = 0; i < cov_.d; ++i) {
    std::vector<double> u(cov_.d);
    for (int j = 0; j < cov_.d; ++j) u[j] = spec_.vector_at(i, j);
    rebuilt.add_outer(spec_.values[i], u);
  }
  for (std::size_t i = 0; i < cov_.a.size(); ++i)
    if (std::abs(rebuilt.a[i] - cov_.a[i]) > 1e-8 * std::max(scale, 1.0))
      throw parameter_error(
          "gaussian model: covariance must be positive semidefinite");

  factor_.assign(static_cast<std::size_t>(cov_.d) * cov_.d, 0.0);
  for (int i = 0; i < cov_.d; ++i) {
    const double root = std::sqrt(spec_.values[i]);
    for (int j = 0; j < cov_.d; ++j)
      factor_[static_cast<std::size_t>(j) * cov_.d + i] =
          root * spec_.vector_at(i, j);
  }
  const double lambda_max = spec_.values.empty() ? 0.0 : spec_.values[0];
  ln_cutoff_ = lambda_max > 0.0 ? std::log(8.0) + 0.5 * std::log(lambda_max)
                                : kNegInf;
}

std::vector<double> GaussianModel::truncated_weights(double t) const {
  const int d = cov_.d;
  std::vector<double> w(d, 0.0);
  if (!(t > 0.0)) return w;

  std::vector<int> active;
  for (int i = 0; i < d; ++i)
    if (spec_.values[i] > 0.0) active.push_back(i);
  const int r = static_cast<int>(active.size());
  if (r == 0) return w;
  if (r > 3)
    throw capability_error(
        "gaussian truncated covariance below the 8-sigma cutoff is "
        "implemented for up to 3 nonzero eigendirections");

  const double t2 = t * t;
  if (r == 1) {
    const double lam = spec_.values[active[0]];
    w[active[0]] = std_normal_trunc_second(t / std::sqrt(lam));
    return w;
  }
  if (r == 2) {
    for (int s = 0; s < 2; ++s) {
      const double lam_i = spec_.values[active[s]];
      const double lam_j = spec_.values[active[1 - s]];
      const double a = t / std::sqrt(lam_i);
      auto f = [&](double y) {
        const double rem = std::max(0.0, t2 - lam_i * y * y);
        return y * y * std::exp(-0.5 * y * y) / std::sqrt(2.0 * M_PI) *
               std_normal_box(std::sqrt(rem / lam_j));
      };
      w[active[s]] = 2.0 * integrate(f, 0.0, a, 1e-11);
    }
    return w;
  }
  // r == 3: nested quadrature, outer over the weighted coordinate.
  for (int s = 0; s < 3; ++s) {
    const double lam_i = spec_.values[active[s]];
    const double lam_j = spec_.values[active[(s + 1) % 3]];
    const double lam_k = spec_.values[active[(s + 2) % 3]];
    const double a = t / std::sqrt(lam_i);
    auto box2 = [&](double s2) {
      // P(lam_j u^2 + lam_k v^2 <= s2) for independent standard u, v.
      if (s2 <= 0.0) return 0.0;
      const double b = std::sqrt(s2 / lam_j);
      auto g = [&](double u) {
        const double rem = std::max(0.0, s2 - lam_j * u * u);
        return std::exp(-0.5 * u * u) / std::sqrt(2.0 * M_PI) *
               std_normal_box(std::sqrt(rem / lam_k));
      };
      return 2.0 * integrate(g, 0.0, b, 1e-12);
    };
    auto f = [&](double y) {
      return y * y * std::exp(-0.5 * y * y) / std::sqrt(2.0 * M_PI) *
             box2(t2 - lam_i * y * y);
    };
    w[active[s]] = 2.0 * integrate(f, 0.0, a, 1e-10);
  }
  return w;
}

SymMatrix GaussianModel::trunc_cov(double ln_t) const {
  if (std::isnan(ln_t)) throw parameter_error("gaussian model: ln t is NaN");
  if (ln_t >= ln_cutoff_) return cov_;
  SymMatrix m(cov_.d);
  const double t = std::exp(ln_t);
  const std::vector<double> w = truncated_weights(t);
  for (int i = 0; i < cov_.d; ++i) {
    const double mass = spec_.values[i] * w[i];
    if (mass <= 0.0) continue;
    std::vector<double> u(cov_.d);
    for (int j = 0; j < cov_.d; ++j) u[j] = spec_.vector_at(i, j);
    m.add_outer(mass, u);
  }
  return m;
}

double GaussianModel::ln_H(double ln_t) const {
  if (std::isnan(ln_t)) throw parameter_error("gaussian model: ln t is NaN");
  const double lambda_max = spec_.values.empty() ? 0.0 : spec_.values[0];
  if (lambda_max <= 0.0) return kNegInf;
  if (ln_t >= ln_cutoff_) return std::log(lambda_max);
  const std::vector<double> w = truncated_weights(std::exp(ln_t));
  double best = 0.0;
  for (int i = 0; i < cov_.d; ++i)
    best = std::max(best, spec_.values[i] * w[i]);
  return best > 0.0 ? std::log(best) : kNegInf;
}

double GaussianModel::coord_trunc_var(int i, double ln_t) const {
  if (i < 0 || i >= cov_.d)
    throw dimension_error("coordinate index out of range");
  return trunc_cov(ln_t).at(i, i);
}

double GaussianModel::ln_tail(double ln_t) const {
  if (std::isnan(ln_t)) throw parameter_error("gaussian model: ln t is NaN");
  if (!std::isfinite(ln_t) && ln_t > 0) return kNegInf;
  LogSum acc;
  const double ln_scale = ln_t - 0.5 * std::log(static_cast<double>(cov_.d));
  for (int i = 0; i < cov_.d; ++i) {
    const double var = cov_.at(i, i);
    if (var <= 0.0) continue;
    // P(|x_i| > t/sqrt(d)) = erfc(z) with z = (t/sqrt(d)) / sqrt(2 var)
    const double ln_z = ln_scale - 0.5 * (std::log(2.0) + std::log(var));
    if (ln_z > 350.0) continue;  // e^700 std devs: beyond any double tail
    const double z = std::exp(ln_z);
    if (z <= 0.0) {
      acc.add_ln(0.0);  // erfc(0) = 1
      continue;
    }
    acc.add_ln(ln_erfc(z));
  }
  return std::min(acc.ln_value(), 0.0);
}

std::size_t GaussianModel::cov_epoch(double ln_t) const {
  return geometric_epoch(ln_t, ln_cutoff_);
}

void GaussianModel::sample(RngStream& rng, double* out) const {
  const int d = cov_.d;
  double y[8];
  for (int i = 0; i < d; ++i) y[i] = rng.next_normal();
  for (int j = 0; j < d; ++j) {
    double s = 0.0;
    for (int i = 0; i < d; ++i)
      s += factor_[static_cast<std::size_t>(j) * d + i] * y[i];
    out[j] = s;
  }
}

// ---------------------------------------------------------------------------
// Independent coordinates

CoordinateLaw CoordinateLaw::gaussian_law(double sigma) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma))
    throw parameter_error("coordinate law: sigma must be finite and >= 0");
  CoordinateLaw law;
  law.kind = Kind::gaussian;
  law.sigma = sigma;
  return law;
}

CoordinateLaw CoordinateLaw::discrete_law(std::vector<Atom> atoms) {
  CoordinateLaw law;
  law.kind = Kind::discrete_symmetric;
  double mass = 0.0;
  for (const Atom& atom : atoms) {
    if (!(atom.value > 0.0) || !std::isfinite(atom.value))
      throw parameter_error("coordinate law: atom values must be positive");
    if (!(atom.prob > 0.0))
      throw parameter_error("coordinate law: atom probabilities must be positive");
    mass += 2.0 * atom.prob;
  }
  if (mass > 1.0 + 1e-12)
    throw parameter_error(
        "coordinate law: symmetric atom probabilities exceed 1");
  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& x, const Atom& y) { return x.value < y.value; });
  law.atoms = std::move(atoms);
  return law;
}

double CoordinateLaw::second_moment(double t) const {
  if (!(t > 0.0)) return 0.0;
  switch (kind) {
    case Kind::gaussian:
      return sigma > 0.0
                 ? sigma * sigma * std_normal_trunc_second(t / sigma)
                 : 0.0;
    case Kind::discrete_symmetric: {
      double s = 0.0;
      for (const Atom& atom : atoms)
        if (atom.value <= t) s += 2.0 * atom.prob * atom.value * atom.value;
      return s;
    }
    case Kind::zero:
      return 0.0;
  }
  return 0.0;
}

double CoordinateLaw::full_second_moment() const {
  return second_moment(kInf);
}

double CoordinateLaw::tail(double t) const {
  if (t < 0.0) return 1.0;
  switch (kind) {
    case Kind::gaussian:
      return sigma > 0.0 ? std::erfc(t / (sigma * M_SQRT2)) : 0.0;
    case Kind::discrete_symmetric: {
      double s = 0.0;
      for (const Atom& atom : atoms)
        if (atom.value > t) s += 2.0 * atom.prob;
      return s;
    }
    case Kind::zero:
      return 0.0;
  }
  return 0.0;
}

double CoordinateLaw::sample(RngStream& rng) const {
  switch (kind) {
    case Kind::gaussian:
      return sigma * rng.next_normal();
    case Kind::discrete_symmetric: {
      const double u = rng.next_unit();
      double cum = 0.0;
      for (const Atom& atom : atoms) {
        cum += atom.prob;
        if (u <= cum) return atom.value;
        cum += atom.prob;
        if (u <= cum) return -atom.value;
      }
      return 0.0;
    }
    case Kind::zero:
      return 0.0;
  }
  return 0.0;
}

IndependentModel::IndependentModel(std::vector<CoordinateLaw> laws)
    : laws_(std::move(laws)) {
  if (laws_.empty())
    throw dimension_error("independent model needs at least one coordinate");
  double cutoff = 0.0;
  for (const CoordinateLaw& law : laws_) {
    switch (law.kind) {
      case CoordinateLaw::Kind::gaussian:
        cutoff = std::max(cutoff, 8.0 * law.sigma);
        break;
      case CoordinateLaw::Kind::discrete_symmetric:
        if (!law.atoms.empty())
          cutoff = std::max(cutoff, law.atoms.back().value);
        break;
      case CoordinateLaw::Kind::zero:
        break;
    }
  }
  ln_cutoff_ = cutoff > 0.0 ? std::log(cutoff) : kNegInf;
}

double IndependentModel::ln_H(double ln_t) const {
  const double t = std::exp(std::min(ln_t, 700.0));
  double best = 0.0;
  for (const CoordinateLaw& law : laws_)
    best = std::max(best, law.second_moment(t));
  return best > 0.0 ? std::log(best) : kNegInf;
}

SymMatrix IndependentModel::trunc_cov(double ln_t) const {
  if (std::isnan(ln_t))
    throw parameter_error("independent model: ln t is NaN");
  SymMatrix m(dim());
  const double t = std::exp(std::min(ln_t, 700.0));
  for (int i = 0; i < dim(); ++i) m.at(i, i) = laws_[i].second_moment(t);
  return m;
}

double IndependentModel::coord_trunc_var(int i, double ln_t) const {
  if (i < 0 || i >= dim())
    throw dimension_error("coordinate index out of range");
  return laws_[i].second_moment(std::exp(std::min(ln_t, 700.0)));
}

double IndependentModel::ln_tail(double ln_t) const {
  if (std::isnan(ln_t))
    throw parameter_error("independent model: ln t is NaN");
  if (!std::isfinite(ln_t) && ln_t > 0) return kNegInf;
  const double t =
      std::exp(std::min(ln_t, 700.0)) / std::sqrt(static_cast<double>(dim()));
  LogSum acc;
  for (const CoordinateLaw& law : laws_) {
    const double p = law.tail(t);
    if (p > 0.0) acc.add_ln(std::log(p));
  }
  return std::min(acc.ln_value(), 0.0);
}

std::size_t IndependentModel::cov_epoch(double ln_t) const {
  return geometric_epoch(ln_t, ln_cutoff_);
}

void IndependentModel::sample(RngStream& rng, double* out) const {
  for (int i = 0; i < dim(); ++i) out[i] = laws_[i].sample(rng);
}

// ---------------------------------------------------------------------------
// Heavy-tail ladder

Example8Model::Example8Model(StarSet star, Mode mode, int k_max, double kappa)
    : star_(std::move(star)),
      ladder_(mode == Mode::exact_log ? BlockLadder::exact(k_max)
                                      : BlockLadder::scaled(k_max, kappa)),
      mode_(mode) {
  // Windows reference star segments up to index k_max + 1.
  window_segments_ = star_.padded(static_cast<std::size_t>(k_max) + 1);

  p_nonzero_ = 0.0;
  if (mode_ == Mode::scaled) {
    double cum = 0.0;
    for (const BlockLadder::Jump& jump : ladder_.jumps()) {
      const double p = std::exp(jump.ln_q);
      const double value = std::exp(static_cast<double>(jump.n));
      cum += p;
      atom_table_.push_back({cum, value, jump.segment});
      cum += p;
      atom_table_.push_back({cum, -value, jump.segment});
    }
    p_nonzero_ = cum;
  }
}

SymMatrix Example8Model::trunc_cov(double ln_t) const {
  if (std::isnan(ln_t))
    throw parameter_error("heavy-tail model: ln t is NaN");
  SymMatrix m(dim());
  const auto& anchors = ladder_.anchors();
  for (std::size_t a = 0; a + 1 < anchors.size(); ++a) {
    // The window between anchors a and a+1 carries index lower.l + 1 (the
    // seam window of block k is window k + 1, landing on anchor (k+1, 0)).
    const BlockLadder::Anchor& lower = anchors[a];
    const BlockLadder::Anchor& upper = anchors[a + 1];
    const StarSegment& seg = window_segments_[static_cast<std::size_t>(lower.l)];
    const double d_lower =
        (a == 0) ? 0.0  // the bottom atom folds into the first window
                 : std::exp(ladder_.ln_level_at({lower.k, lower.l, 0}));
    const double d_upper =
        std::exp(ladder_.ln_level_at({upper.k, upper.l, 0}));
    // |X| <= t on this segment means |Z| <= t / sigma, and the window mass
    // telescopes: E[Z^2 1{window, |Z| <= s}] = (min(d_up, H(s)) - d_low)+.
    const double threshold = ln_t - std::log(seg.sigma);
    const double d_cut = std::exp(ladder_.ln_H(threshold));
    const double mass = std::min(d_upper, d_cut) - d_lower;
    if (mass > 0.0) m.add_outer(seg.sigma * seg.sigma * mass, seg.z);
  }
  return m;
}

double Example8Model::coord_trunc_var(int i, double ln_t) const {
  if (i < 0 || i >= dim())
    throw dimension_error("coordinate index out of range");
  return trunc_cov(ln_t).at(i, i);
}

double Example8Model::ln_tail(double ln_t) const {
  if (std::isnan(ln_t))
    throw parameter_error("heavy-tail model: ln t is NaN");
  if (!std::isfinite(ln_t) && ln_t > 0) return kNegInf;
  LogSum acc;
  for (const BlockLadder::Jump& jump : ladder_.jumps())
    if (static_cast<double>(jump.n) > ln_t) acc.add_ln(jump.ln_q);
  // Closed-form bound past the enumeration horizon (see the ladder's mass
  // bound): sum_{n>N} log(n+1) e^{-2n} / 2.
  const double N = std::max(std::floor(std::max(ln_t, 0.0)), kJumpHorizon);
  if (std::isfinite(N)) {
    const double r = std::exp(-2.0);
    const double bracket = std::log(N + 2.0) / (1.0 - r) +
                           r / ((N + 2.0) * (1.0 - r) * (1.0 - r));
    acc.add_ln(-2.0 * (N + 1.0) + std::log(bracket) - std::log(2.0));
  }
  const double ln_q_tail = acc.ln_value();
  if (ln_q_tail == kNegInf) return kNegInf;
  return std::min(std::log(2.0) + ln_q_tail, 0.0);
}

std::size_t Example8Model::cov_epoch(double ln_t) const {
  // The covariance is a fixed function of the per-window captured levels;
  // hashing those gives an exact reuse key.
  std::size_t h = 1469598103934665603ULL;
  for (const StarSegment& seg : window_segments_)
    h = hash_mix(h, ladder_.ln_H(ln_t - std::log(seg.sigma)));
  return h;
}

void Example8Model::sample(RngStream& rng, double* out) const {
  double z;
  sample_zx(rng, &z, out);
}

void Example8Model::sample_zx(RngStream& rng, double* z_out,
                              double* x_out) const {
  if (mode_ != Mode::scaled)
    throw capability_error(
        "exact heavy-tail magnitudes exceed floating point; sampling is "
        "available in scaled mode only");
  const int d = dim();
  const double u = rng.next_unit();
  *z_out = 0.0;
  std::fill(x_out, x_out + d, 0.0);
  if (u >= p_nonzero_) return;
  auto it = std::lower_bound(
      atom_table_.begin(), atom_table_.end(), u,
      [](const AtomRow& row, double x) { return row.cum < x; });
  if (it == atom_table_.end()) return;
  const StarSegment& seg =
      window_segments_[static_cast<std::size_t>(it->segment - 1)];
  *z_out = it->value;
  for (int j = 0; j < d; ++j) x_out[j] = seg.sigma * seg.z[j] * it->value;
}

SymMatrix Example8Model::trunc_cov_at_anchor(int k, int l) const {
  const auto& anchors = ladder_.anchors();
  std::size_t target = anchors.size();
  for (std::size_t a = 0; a < anchors.size(); ++a)
    if (anchors[a].k == k && anchors[a].l == l) target = a;
  if (target == anchors.size())
    throw parameter_error("heavy-tail model: no such block anchor");
  SymMatrix m(dim());
  const double d_cut =
      std::exp(ladder_.ln_level_at({anchors[target].k, anchors[target].l, 0}));
  for (std::size_t a = 0; a + 1 < anchors.size(); ++a) {
    const BlockLadder::Anchor& lower = anchors[a];
    const BlockLadder::Anchor& upper = anchors[a + 1];
    const StarSegment& seg = window_segments_[static_cast<std::size_t>(lower.l)];
    // Same telescoped window mass as trunc_cov, with the cut pinned to the
    // target anchor's level. Windows below are full; the bottom atom at the
    // first anchor (folded into window 1) is captured from target (1,0) on.
    const double d_lower =
        (a == 0) ? 0.0
                 : std::exp(ladder_.ln_level_at({lower.k, lower.l, 0}));
    const double d_upper =
        std::exp(ladder_.ln_level_at({upper.k, upper.l, 0}));
    const double mass = std::min(d_upper, d_cut) - d_lower;
    if (mass > 0.0) m.add_outer(seg.sigma * seg.sigma * mass, seg.z);
  }
  return m;
}

double Example8Model::ln_H_at_anchor(int k, int l) const {
  return ladder_.ln_level_at({k, l, 0});
}

std::unique_ptr<Example8Model> build_example8(StarSet star,
                                              Example8Model::Mode mode,
                                              int k_max, double kappa) {
  return std::make_unique<Example8Model>(std::move(star), mode, k_max, kappa);
}

// ---------------------------------------------------------------------------
// Declarative configs

namespace {

using nlohmann::json;

SymMatrix cov_from_json(const json& rows) {
  if (!rows.is_array() || rows.empty())
    throw config_error("model config: cov must be a nonempty array of rows");
  const int d = static_cast<int>(rows.size());
  SymMatrix m(d);
  for (int i = 0; i < d; ++i) {
    const json& row = rows.at(i);
    if (!row.is_array() || static_cast<int>(row.size()) != d)
      throw config_error("model config: cov rows must all have length d");
    for (int j = 0; j < d; ++j) m.at(i, j) = row.at(j).get<double>();
  }
  return m;
}

CoordinateLaw law_from_json(const json& j) {
  const std::string law = j.at("law").get<std::string>();
  if (law == "gaussian")
    return CoordinateLaw::gaussian_law(j.at("sigma").get<double>());
  if (law == "zero") return CoordinateLaw::zero_law();
  if (law == "discrete_symmetric") {
    std::vector<CoordinateLaw::Atom> atoms;
    for (const json& atom : j.at("atoms"))
      atoms.push_back(
          {atom.at("value").get<double>(), atom.at("prob").get<double>()});
    return CoordinateLaw::discrete_law(std::move(atoms));
  }
  throw config_error("model config: unknown coordinate law '" + law + "'");
}

StarSet star_from_json_obj(const json& j) {
  std::vector<StarSegment> segments;
  for (const json& seg : j.at("segments")) {
    StarSegment segment;
    segment.sigma = seg.at("sigma").get<double>();
    segment.z = seg.at("z").get<std::vector<double>>();
    segments.push_back(std::move(segment));
  }
  return StarSet::create(std::move(segments));
}

}  // namespace

StarSet star_from_json(const std::string& json_text) {
  try {
    return star_from_json_obj(json::parse(json_text));
  } catch (const json::exception& e) {
    throw config_error(std::string("star set config: ") + e.what());
  }
}

std::unique_ptr<MomentModel> model_from_json(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw config_error(std::string("model config: ") + e.what());
  }
  try {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "gaussian")
      return std::make_unique<GaussianModel>(cov_from_json(j.at("cov")));
    if (kind == "independent_components") {
      std::vector<CoordinateLaw> laws;
      for (const json& law : j.at("coordinate_laws"))
        laws.push_back(law_from_json(law));
      return std::make_unique<IndependentModel>(std::move(laws));
    }
    if (kind == "example8_exact" || kind == "example8_scaled") {
      StarSet star = star_from_json_obj(j.at("star_set"));
      const int k_max = j.at("k_max").get<int>();
      if (kind == "example8_exact")
        return build_example8(std::move(star), Example8Model::Mode::exact_log,
                              k_max);
      const double kappa = j.at("kappa").get<double>();
      return build_example8(std::move(star), Example8Model::Mode::scaled,
                            k_max, kappa);
    }
    throw config_error("model config: unknown kind '" + kind + "'");
  } catch (const json::exception& e) {
    throw config_error(std::string("model config: ") + e.what());
  }
}

}  // namespace limset
