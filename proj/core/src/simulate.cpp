#include "limset/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>
#include <utility>

#include "limset/errors.hpp"
#include "limset/taut_string.hpp"

namespace limset {

namespace {

void check_positive_count(long long v, const char* what) {
  if (v < 1) {
    std::ostringstream os;
    os << what << " must be >= 1, got " << v;
    throw parameter_error(os.str());
  }
}

// checkpoints restricted to the normalizer's tabulated/defined range
std::vector<long long> usable_checkpoints(const NormalizerSeq& seq, long long n_max,
                                          double theta) {
  auto range = seq.ln_range();
  std::vector<long long> out;
  for (long long n : geometric_checkpoints(n_max, theta)) {
    double ln_n = std::log(static_cast<double>(n));
    if (ln_n >= range.first && ln_n <= range.second) out.push_back(n);
  }
  return out;
}

// Draws one step into x, applying the antithetic sign.
void draw_step(const MomentModel& model, RngStream& rng, bool antithetic,
               std::vector<double>& x) {
  model.sample(rng, x.data());
  if (antithetic)
    for (double& v : x) v = -v;
}

void require_sampler(const MomentModel& model) {
  if (!model.can_sample())
    throw capability_error("simulation: model kind '" + model.kind() +
                           "' has no sampler in this configuration");
}

double sup_dist(const GridFn& a, const GridFn& b) {
  if (a.dim() != b.dim() || a.n_grid() != b.n_grid())
    throw dimension_error("sup distance: grid functions must share dim and grid");
  double best = 0.0;
  for (int i = 0; i <= a.n_grid(); ++i) {
    double s = 0.0;
    for (int c = 0; c < a.dim(); ++c) {
      double d = a.at(i, c) - b.at(i, c);
      s += d * d;
    }
    best = std::max(best, s);
  }
  return std::sqrt(best);
}

void check_cluster_config(const ClusterConfig& cfg) {
  if (!(cfg.theta > 1.0) || !std::isfinite(cfg.theta))
    throw parameter_error("cluster: checkpoint ratio theta must be > 1");
  if (!(cfg.delta > 0.0) || !std::isfinite(cfg.delta))
    throw parameter_error("cluster: thinning delta must be > 0");
  if (!(cfg.burn_in_exponent >= 0.0) || !(cfg.burn_in_exponent < 1.0))
    throw parameter_error("cluster: burn-in exponent must lie in [0, 1)");
  if (cfg.streams < 1) throw parameter_error("cluster: needs at least one stream");
  if (cfg.workers < 1) throw parameter_error("cluster: needs at least one worker");
  if (cfg.grid_size < 1) throw parameter_error("cluster: grid size must be >= 1");
  if (cfg.snapshot_count < 0)
    throw parameter_error("cluster: snapshot count must be >= 0");
}

}  // namespace

std::vector<long long> geometric_checkpoints(long long n_max, double theta) {
  check_positive_count(n_max, "n_max");
  if (!(theta > 1.0) || !std::isfinite(theta))
    throw parameter_error("checkpoints: theta must be a finite value > 1");
  std::vector<long long> out;
  for (int k = 0;; ++k) {
    double v = std::pow(theta, k);
    if (!(v <= static_cast<double>(n_max))) break;
    auto n = static_cast<long long>(std::ceil(v));
    if (n > n_max) break;
    if (out.empty() || n > out.back()) out.push_back(n);
  }
  return out;
}

std::vector<SumPoint> simulate_partial_sums(const MomentModel& model,
                                            const NormalizerSeq& seq, long long n_max,
                                            RngStream& rng, double theta,
                                            bool antithetic) {
  require_sampler(model);
  std::vector<long long> marks = usable_checkpoints(seq, n_max, theta);
  if (marks.empty())
    throw parameter_error(
        "partial sums: no geometric checkpoint falls inside the normalizer's "
        "range (the closed-form families start at n = 3)");

  const int d = model.dim();
  std::vector<double> x(d), sum(d, 0.0);
  std::vector<SumPoint> out;
  out.reserve(marks.size());

  std::size_t next = 0;
  for (long long n = 1; n <= marks.back(); ++n) {
    draw_step(model, rng, antithetic, x);
    for (int c = 0; c < d; ++c) sum[c] += x[c];
    if (n == marks[next]) {
      SumPoint pt;
      pt.n = n;
      pt.ln_c = seq.ln_c(std::log(static_cast<double>(n)));
      double c_n = std::exp(pt.ln_c);
      pt.y.resize(d);
      for (int c = 0; c < d; ++c) {
        pt.y[c] = sum[c] / c_n;
        if (!std::isfinite(pt.y[c]))
          throw parameter_error("partial sums: accumulated sum left float range");
      }
      out.push_back(std::move(pt));
      ++next;
    }
  }
  return out;
}

GridFn simulate_path_process(const MomentModel& model, const NormalizerSeq& seq,
                             long long n, int grid_size, RngStream& rng,
                             bool antithetic) {
  require_sampler(model);
  check_positive_count(n, "n");
  if (grid_size < 1) throw parameter_error("path process: grid size must be >= 1");
  if (n > std::numeric_limits<long long>::max() / grid_size)
    throw parameter_error("path process: n * grid_size exceeds integer range");

  const int d = model.dim();
  double c_n = std::exp(seq.ln_c(std::log(static_cast<double>(n))));

  GridFn f(d, grid_size);
  std::vector<double> sum(d, 0.0), pending(d);
  bool have_pending = false;
  long long j = 0;  // sum currently holds S_j

  for (int i = 0; i <= grid_size; ++i) {
    long long idx = n * i;
    long long m = idx / grid_size;
    long long rem = idx % grid_size;
    while (j < m) {
      if (!have_pending) draw_step(model, rng, antithetic, pending);
      have_pending = false;
      for (int c = 0; c < d; ++c) sum[c] += pending[c];
      ++j;
    }
    if (rem != 0 && !have_pending) {
      draw_step(model, rng, antithetic, pending);
      have_pending = true;
    }
    double frac = static_cast<double>(rem) / grid_size;
    for (int c = 0; c < d; ++c) {
      double v = sum[c] + (rem != 0 ? frac * pending[c] : 0.0);
      f.at(i, c) = v / c_n;
      if (!std::isfinite(f.at(i, c)))
        throw parameter_error("path process: accumulated sum left float range");
    }
  }
  return f;
}

GridFn brownian_path(long long n, int grid_size, const SymMatrix& scale_matrix,
                     double c_n, RngStream& rng) {
  check_positive_count(n, "n");
  if (grid_size < 1) throw parameter_error("brownian path: grid size must be >= 1");
  if (scale_matrix.d < 1)
    throw dimension_error("brownian path: scale matrix must be at least 1x1");
  if (!(c_n > 0.0) || !std::isfinite(c_n))
    throw parameter_error("brownian path: c_n must be a finite value > 0");

  const int d = scale_matrix.d;
  const double step = std::sqrt(static_cast<double>(n) / grid_size);
  GridFn f(d, grid_size);
  std::vector<double> z(d);
  for (int i = 1; i <= grid_size; ++i) {
    for (int c = 0; c < d; ++c) z[c] = rng.next_normal();
    for (int r = 0; r < d; ++r) {
      double inc = 0.0;
      for (int c = 0; c < d; ++c) inc += scale_matrix.at(r, c) * z[c];
      f.at(i, r) = f.at(i - 1, r) + step * inc / c_n;
    }
  }
  return f;
}

SmallBallEstimate small_ball_estimate(const GridFn& f, const SymMatrix& scale_matrix,
                                      double c_n, long long n, double epsilon,
                                      long long reps, RngStream& rng) {
  f.validate();
  if (f.dim() != scale_matrix.d)
    throw dimension_error("small ball: center and scale matrix dimensions differ");
  if (!(epsilon > 0.0) || !std::isfinite(epsilon))
    throw parameter_error("small ball: epsilon must be a finite value > 0");
  check_positive_count(reps, "reps");
  check_positive_count(n, "n");
  if (!(c_n > 0.0) || !std::isfinite(c_n))
    throw parameter_error("small ball: c_n must be a finite value > 0");

  const int d = f.dim();
  const int grid = f.n_grid();
  const double step = std::sqrt(static_cast<double>(n) / grid);
  const double eps2 = epsilon * epsilon;

  std::vector<double> z(d), cur(d);
  long long hits = 0;
  for (long long r = 0; r < reps; ++r) {
    std::fill(cur.begin(), cur.end(), 0.0);
    double worst = 0.0;
    for (int i = 1; i <= grid; ++i) {
      for (int c = 0; c < d; ++c) z[c] = rng.next_normal();
      double node = 0.0;
      for (int a = 0; a < d; ++a) {
        double inc = 0.0;
        for (int c = 0; c < d; ++c) inc += scale_matrix.at(a, c) * z[c];
        cur[a] += step * inc / c_n;
        double diff = cur[a] - f.at(i, a);
        node += diff * diff;
      }
      worst = std::max(worst, node);
      // keep drawing even when the ball is already missed, so the stream
      // position per replicate is fixed
    }
    if (worst < eps2) ++hits;
  }

  SmallBallEstimate est;
  est.successes = hits;
  est.reps = reps;
  est.p_hat = static_cast<double>(hits) / static_cast<double>(reps);
  est.se = std::sqrt(est.p_hat * (1.0 - est.p_hat) / static_cast<double>(reps));
  return est;
}

ClusterReport empirical_cluster(std::vector<ClusterPoint> visits, long long n_max,
                                const ClusterConfig& cfg) {
  check_cluster_config(cfg);
  check_positive_count(n_max, "n_max");

  ClusterReport rep;
  rep.n_max = n_max;
  rep.config = cfg;
  rep.burn_in = static_cast<long long>(
      std::ceil(std::pow(static_cast<double>(n_max), cfg.burn_in_exponent)));

  rep.points.reserve(visits.size());
  for (auto& v : visits)
    if (v.n >= rep.burn_in) rep.points.push_back(std::move(v));
  if (rep.points.empty())
    throw parameter_error(
        "empirical cluster: no checkpoint survives the burn-in window");

  std::sort(rep.points.begin(), rep.points.end(),
            [](const ClusterPoint& a, const ClusterPoint& b) {
              if (a.stream != b.stream) return a.stream < b.stream;
              return a.n < b.n;
            });

  rep.checkpoints.reserve(rep.points.size());
  for (const auto& p : rep.points) rep.checkpoints.push_back(p.n);
  std::sort(rep.checkpoints.begin(), rep.checkpoints.end());
  rep.checkpoints.erase(std::unique(rep.checkpoints.begin(), rep.checkpoints.end()),
                        rep.checkpoints.end());

  // canonical net: thin in sorted order so the result depends only on the
  // visit set, not on stream arrival order
  std::vector<std::vector<double>> cand;
  cand.reserve(rep.points.size());
  for (const auto& p : rep.points) cand.push_back(p.y);
  std::sort(cand.begin(), cand.end());
  const double delta2 = cfg.delta * cfg.delta;
  for (const auto& y : cand) {
    bool fresh = true;
    for (const auto& q : rep.net) {
      double s = 0.0;
      for (std::size_t c = 0; c < y.size(); ++c) {
        double dd = y[c] - q[c];
        s += dd * dd;
      }
      if (s <= delta2) {
        fresh = false;
        break;
      }
    }
    if (fresh) rep.net.push_back(y);
  }
  return rep;
}

ClusterReport run_cluster(const MomentModel& model, const NormalizerSeq& seq,
                          long long n_max, std::uint64_t seed,
                          const ClusterConfig& cfg) {
  check_cluster_config(cfg);
  require_sampler(model);

  // snapshot checkpoints are schedule-only, so they are known up front
  std::vector<long long> marks = usable_checkpoints(seq, n_max, cfg.theta);
  long long burn_in = static_cast<long long>(
      std::ceil(std::pow(static_cast<double>(n_max), cfg.burn_in_exponent)));
  std::vector<long long> kept;
  for (long long n : marks)
    if (n >= burn_in) kept.push_back(n);
  std::vector<long long> snap_ns;
  if (cfg.snapshot_count > 0 && !kept.empty()) {
    std::size_t take = std::min<std::size_t>(cfg.snapshot_count, kept.size());
    snap_ns.assign(kept.end() - take, kept.end());
  }

  struct StreamResult {
    std::vector<SumPoint> points;
    std::vector<PathSnapshot> snapshots;
    std::exception_ptr error;
  };
  std::vector<StreamResult> slots(cfg.streams);

  auto run_stream = [&](int s) {
    StreamResult& slot = slots[s];
    try {
      RngStream rng(seed, static_cast<std::uint64_t>(s));
      slot.points = simulate_partial_sums(model, seq, n_max, rng, cfg.theta);
      for (long long n : snap_ns) {
        RngStream replay(seed, static_cast<std::uint64_t>(s));
        PathSnapshot snap;
        snap.stream = s;
        snap.n = n;
        snap.path = simulate_path_process(model, seq, n, cfg.grid_size, replay);
        slot.snapshots.push_back(std::move(snap));
      }
    } catch (...) {
      slot.error = std::current_exception();
    }
  };

  int workers = std::min(cfg.workers, cfg.streams);
  if (workers <= 1) {
    for (int s = 0; s < cfg.streams; ++s) run_stream(s);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (int s = w; s < cfg.streams; s += workers) run_stream(s);
      });
    for (auto& th : pool) th.join();
  }
  for (const auto& slot : slots)
    if (slot.error) std::rethrow_exception(slot.error);

  std::vector<ClusterPoint> visits;
  for (int s = 0; s < cfg.streams; ++s)
    for (const auto& pt : slots[s].points)
      visits.push_back(ClusterPoint{s, pt.n, pt.y});

  ClusterReport rep = empirical_cluster(std::move(visits), n_max, cfg);
  rep.seed = seed;
  for (int s = 0; s < cfg.streams; ++s)
    for (auto& snap : slots[s].snapshots) rep.snapshots.push_back(std::move(snap));
  return rep;
}

double dist_to_predicted_A(const std::vector<double>& p, const MomentModel& model,
                           const PredictedSets& sets) {
  if (static_cast<int>(p.size()) != model.dim())
    throw dimension_error("predicted set distance: point dimension mismatch");
  for (double v : p)
    if (!std::isfinite(v))
      throw parameter_error("predicted set distance: point must be finite");

  if (const auto* ex = dynamic_cast<const Example8Model*>(&model)) {
    double a = sets.alpha.alpha0;
    if (!(a > 0.0)) {
      double s = 0.0;
      for (double v : p) s += v * v;
      return std::sqrt(s);
    }
    std::vector<double> q(p);
    for (double& v : q) v /= a;
    return a * ex->star().dist(q);
  }

  if (const auto* g = dynamic_cast<const GaussianModel*>(&model)) {
    EigenSystem sys = eigen_decompose(g->cov());
    double a = sets.alpha.alpha0;
    double par2 = 0.0, r2 = 0.0, perp2 = 0.0;
    for (int i = 0; i < sys.d; ++i) {
      double w = sys.project(i, p);
      if (i < sys.rank) {
        par2 += w * w;
        r2 += w * w / sys.values[i];
      } else {
        perp2 += w * w;
      }
    }
    double r = std::sqrt(r2);
    if (r <= a || par2 == 0.0) return std::sqrt(perp2);
    // radial surrogate toward the ellipsoid boundary; exact when isotropic
    double radial = (1.0 - a / r) * std::sqrt(par2);
    return std::sqrt(perp2 + radial * radial);
  }

  // per-coordinate alpha box (independent components and anything else)
  if (sets.coordinate.size() != p.size())
    throw dimension_error("predicted set distance: coordinate alphas missing");
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    double over = std::max(0.0, std::fabs(p[i]) - sets.coordinate[i].alpha0);
    s += over * over;
  }
  return std::sqrt(s);
}

ContainmentSummary containment_check(const ClusterReport& report,
                                     const PredictedSets& sets,
                                     const MomentModel& model, double tol) {
  if (!(tol > 0.0) || !std::isfinite(tol))
    throw parameter_error("containment: tolerance must be a finite value > 0");
  if (static_cast<int>(sets.coordinate.size()) != model.dim())
    throw dimension_error("containment: predicted sets do not match the model");

  ContainmentSummary sum;
  sum.tol = tol;
  sum.snapshots_empty = report.snapshots.empty();

  for (const auto& snap : report.snapshots) {
    if (snap.path.dim() != model.dim())
      throw dimension_error("containment: snapshot dimension mismatch");
    double worst = 0.0;
    for (int c = 0; c < model.dim(); ++c) {
      GridFn comp = snap.path.component(c);
      double a = sets.coordinate[c].alpha0;
      double dist = a > 0.0 ? dist_to_scaled_strassen(comp, a) : comp.sup_norm();
      worst = std::max(worst, dist);
    }
    sum.upper_dist.push_back(worst);
    sum.max_upper_dist = std::max(sum.max_upper_dist, worst);
    if (worst > tol) ++sum.upper_violations;

    double excess = 0.0;
    for (int i = 1; i <= snap.path.n_grid(); ++i) {
      double t = snap.path.t(i);
      if (t < 0.1) continue;
      std::vector<double> p(model.dim());
      for (int c = 0; c < model.dim(); ++c) p[c] = snap.path.at(i, c) / std::sqrt(t);
      excess = std::max(excess, dist_to_predicted_A(p, model, sets));
    }
    sum.max_sqrt_excess = std::max(sum.max_sqrt_excess, excess);
    if (excess > tol) ++sum.sqrt_violations;
  }

  // lower coverage: probes x*g over the predicted extreme points and the
  // fixed unit-energy sample
  if (sets.a_points.empty()) {
    sum.probes_flagged_empty = true;
    sum.coverage = 1.0;
    return sum;
  }
  int grid = report.snapshots.empty() ? report.config.grid_size
                                      : report.snapshots.front().path.n_grid();
  std::vector<GridFn> shapes = strassen_sample(grid);
  sum.probe_count = static_cast<long long>(sets.a_points.size()) *
                    static_cast<long long>(shapes.size());
  if (sum.snapshots_empty) {
    sum.coverage = 0.0;
    return sum;
  }
  for (const auto& x : sets.a_points) {
    for (const auto& g : shapes) {
      GridFn probe(model.dim(), grid);
      for (int i = 0; i <= grid; ++i)
        for (int c = 0; c < model.dim(); ++c) probe.at(i, c) = g.at(i, 0) * x[c];
      double best = std::numeric_limits<double>::infinity();
      for (const auto& snap : report.snapshots)
        best = std::min(best, sup_dist(probe, snap.path));
      if (best <= tol) ++sum.probes_covered;
    }
  }
  sum.coverage =
      static_cast<double>(sum.probes_covered) / static_cast<double>(sum.probe_count);
  return sum;
}

TalagrandDiagnostic talagrand_diagnostic(long long n, int grid_size, double lambda,
                                         double x, double c_const, long long reps,
                                         RngStream& rng) {
  check_positive_count(n, "n");
  check_positive_count(reps, "reps");
  if (grid_size < 1) throw parameter_error("diagnostic: grid size must be >= 1");
  if (!(lambda > 0.0) || !(x > 0.0))
    throw parameter_error("diagnostic: lambda and x must be > 0");

  SymMatrix one = SymMatrix::identity(1);
  double c_n = std::sqrt(static_cast<double>(n));  // W(n.)/sqrt(n): standard path
  long long over = 0;
  for (long long r = 0; r < reps; ++r) {
    GridFn path = brownian_path(n, grid_size, one, c_n, rng);
    if (dist_to_scaled_strassen(path, lambda) >= x) ++over;
  }
  TalagrandDiagnostic diag;
  diag.x = x;
  diag.lambda = lambda;
  diag.c_const = c_const;
  diag.reps = reps;
  diag.empirical = static_cast<double>(over) / static_cast<double>(reps);
  diag.bound = std::exp(c_const / (x * x) - x * lambda / 2.0 - lambda * lambda / 2.0);
  return diag;
}

}  // namespace limset
