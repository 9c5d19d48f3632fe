#ifndef LIMSET_SIMULATE_HPP
#define LIMSET_SIMULATE_HPP

#include <cstdint>
#include <vector>

#include "limset/criteria.hpp"
#include "limset/grid_fn.hpp"
#include "limset/moment_model.hpp"
#include "limset/normalizer.hpp"
#include "limset/rng_stream.hpp"
#include "limset/sym_matrix.hpp"

namespace limset {

// Geometric checkpoint schedule: distinct values of ceil(theta^k) up to and
// including n_max's bracket, clipped to n <= n_max. theta > 1.
std::vector<long long> geometric_checkpoints(long long n_max, double theta = 1.1);

// One normalized partial-sum observation S_n / c_n.
struct SumPoint {
  long long n = 0;
  double ln_c = 0.0;
  std::vector<double> y;
};

// Accumulates S_n over a single pass of n_max i.i.d. draws and emits
// S_n / c_n at the geometric checkpoints that lie inside the normalizer's
// range (the closed-form families start at n = 3). Draws X_1, X_2, ... in
// order, so results are bit-identical for a fixed (seed, stream_id).
// antithetic = true negates every draw; the pairing is exact because all
// shipped model laws are symmetric.
// Throws capability_error when the model cannot sample, parameter_error on
// an empty checkpoint set or a non-finite partial sum.
std::vector<SumPoint> simulate_partial_sums(const MomentModel& model,
                                            const NormalizerSeq& seq, long long n_max,
                                            RngStream& rng, double theta = 1.1,
                                            bool antithetic = false);

// The rescaled partial-sum path s_n = S_(n)/c_n on the uniform grid:
// S_(n)(t) = S_[nt] + (nt - [nt]) X_[nt]+1, evaluated with integer node
// arithmetic (m = floor(n i / G) exactly), so grid-aligned nodes carry the
// partial sums themselves and s_n(1) c_n == S_n bit-for-bit when the same
// fresh stream also feeds simulate_partial_sums.
GridFn simulate_path_process(const MomentModel& model, const NormalizerSeq& seq,
                             long long n, int grid_size, RngStream& rng,
                             bool antithetic = false);

// Brownian surrogate path: per step, increment sqrt(n/grid_size) N(0, I_d),
// left-multiplied by scale_matrix and divided by c_n; increments drawn in
// step order, coordinates in index order.
GridFn brownian_path(long long n, int grid_size, const SymMatrix& scale_matrix,
                     double c_n, RngStream& rng);

struct SmallBallEstimate {
  double p_hat = 0.0;
  double se = 0.0;  // binomial standard error
  long long successes = 0;
  long long reps = 0;
};

// Monte Carlo frequency of sup-norm hits ||brownian_path - f|| < epsilon,
// on f's own grid.
SmallBallEstimate small_ball_estimate(const GridFn& f, const SymMatrix& scale_matrix,
                                      double c_n, long long n, double epsilon,
                                      long long reps, RngStream& rng);

struct ClusterConfig {
  double theta = 1.1;            // checkpoint ratio
  double delta = 0.15;           // thinning resolution of the retained net
  double burn_in_exponent = 0.3; // discard checkpoints below n_max^exponent
  int streams = 4;               // independent replicas (stream ids 0..streams-1)
  int workers = 1;               // thread cap; any value yields identical output
  int grid_size = 64;            // functional snapshot grid
  int snapshot_count = 4;        // path snapshots at the last checkpoints, per stream
};

struct ClusterPoint {
  int stream = 0;
  long long n = 0;
  std::vector<double> y;  // S_n / c_n
};

struct PathSnapshot {
  int stream = 0;
  long long n = 0;
  GridFn path;  // s_n
};

// Empirical stand-in for the cluster set of {S_n / c_n}: every visit past
// the burn-in plus a delta-thinned net of those visits. The net is rebuilt
// canonically (points sorted, then greedily thinned), so it depends only on
// the visit set, never on worker scheduling.
struct ClusterReport {
  long long n_max = 0;
  std::uint64_t seed = 0;
  ClusterConfig config;
  std::vector<long long> checkpoints;     // post-burn-in schedule
  long long burn_in = 0;                  // smallest retained n
  std::vector<ClusterPoint> points;       // retained visits, (stream, n) order
  std::vector<std::vector<double>> net;   // delta-net, canonical order
  std::vector<PathSnapshot> snapshots;
};

// Thinning core: applies the burn-in window to the visit list and builds the
// canonical delta-net. Throws parameter_error when no visit survives.
ClusterReport empirical_cluster(std::vector<ClusterPoint> visits, long long n_max,
                                const ClusterConfig& cfg);

// Full pipeline: runs `streams` independent replicas of the partial-sum
// recursion (at most `workers` at a time), merges their visits, thins, and
// replays path snapshots at the last `snapshot_count` checkpoints of each
// stream. Output is a pure function of (model, seq, n_max, seed, config).
ClusterReport run_cluster(const MomentModel& model, const NormalizerSeq& seq,
                          long long n_max, std::uint64_t seed,
                          const ClusterConfig& cfg = {});

// Euclidean distance from p to the predicted point cluster set: the
// alpha0-scaled star for the heavy-tail ladder, the covariance ellipsoid
// (radial surrogate off-axis, exact for isotropic covariances) for the
// gaussian kind, and the per-coordinate alpha box otherwise.
double dist_to_predicted_A(const std::vector<double>& p, const MomentModel& model,
                           const PredictedSets& sets);

struct ContainmentSummary {
  double tol = 0.0;
  // upper sandwich: per snapshot, the worst per-coordinate distance to the
  // coordinate-alpha-scaled unit-energy set
  std::vector<double> upper_dist;
  double max_upper_dist = 0.0;
  long long upper_violations = 0;  // snapshots with upper_dist > tol
  // lower sandwich: probes x*g with x from the predicted extreme points and
  // g from the fixed unit-energy sample
  long long probe_count = 0;
  long long probes_covered = 0;
  double coverage = 1.0;  // fraction of probes approached within tol
  bool probes_flagged_empty = false;
  bool snapshots_empty = false;
  // sqrt(t) envelope: f(t)/sqrt(t) against the predicted point set, nodes
  // with t >= 0.1
  double max_sqrt_excess = 0.0;
  long long sqrt_violations = 0;  // snapshots with any node excess > tol
};

// Checks every functional snapshot of the report against the predicted
// sets; distances are >= 0 and coverage lies in [0, 1].
ContainmentSummary containment_check(const ClusterReport& report,
                                     const PredictedSets& sets,
                                     const MomentModel& model, double tol);

// Informational tail diagnostic for the distance of a normalized Brownian
// path to the lambda-scaled unit-energy set, compared against
// exp(c_const/x^2 - x lambda/2 - lambda^2/2). The constant in the exponent
// is not pinned by theory, so this is reported, never asserted.
struct TalagrandDiagnostic {
  double x = 0.0;
  double lambda = 0.0;
  double c_const = 1.0;
  double empirical = 0.0;  // fraction of paths with distance >= x
  double bound = 0.0;
  long long reps = 0;
};
TalagrandDiagnostic talagrand_diagnostic(long long n, int grid_size, double lambda,
                                         double x, double c_const, long long reps,
                                         RngStream& rng);

}  // namespace limset

#endif
