#ifndef LIMSET_CRITERIA_HPP
#define LIMSET_CRITERIA_HPP

#include <vector>

#include "limset/eigen_system.hpp"
#include "limset/grid_fn.hpp"
#include "limset/moment_model.hpp"
#include "limset/normalizer.hpp"
#include "limset/series.hpp"

namespace limset {

struct CriteriaConfig {
  SeriesConfig series;
  // Membership is tested at each radius; the sweep runs large to small.
  std::vector<double> epsilons = {0.5, 0.2, 0.1, 0.05, 0.02};
  double alpha_hi = 3.0;     // scale scan upper end
  double alpha_step = 0.05;  // coarse scan resolution
  int refine_rounds = 10;    // bisection rounds on each verdict boundary
};

// Spectral data of the truncated covariance at threshold t (ln t given):
// values are the eigenvalues of trunc_cov, vectors its orthonormal
// eigendirections.
EigenSystem eigensystem_at(const MomentModel& model, double ln_t);

// Result of locating the divergence boundary in the scale alpha: the series
// with exponents alpha^2 c_n^2 / (2 n H_n) flips from Divergent to
// Convergent near alpha0; [lo, hi] brackets the flip (lo = largest scale
// still Divergent, hi = smallest scale already Convergent).
struct AlphaBracket {
  double alpha0 = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  double half_width() const { return 0.5 * (hi - lo); }
};

AlphaBracket alpha0(const MomentModel& model, const NormalizerSeq& seq,
                    const CriteriaConfig& cfg = {});

// Same boundary per coordinate, with H replaced by the coordinate's
// truncated variance.
std::vector<AlphaBracket> coordinate_alphas(const MomentModel& model,
                                            const NormalizerSeq& seq,
                                            const CriteriaConfig& cfg = {});

enum class Membership { member, non_member, undecided };

const char* to_string(Membership m);

struct EpsilonVerdict {
  double epsilon = 0.0;
  SeriesClass cls = SeriesClass::undecided;  // after monotone closure
  SeriesClass raw = SeriesClass::undecided;  // direct classifier output
  double fitted_s = 0.0;
};

// Divergence must be monotone in the radius: if the series diverges at some
// epsilon it diverges at every larger epsilon. The closure enforces that
// invariant on the reported classes; `closure_applied` records whether the
// raw estimates ever violated it.
struct MembershipVerdict {
  std::vector<EpsilonVerdict> per_epsilon;  // descending epsilon
  Membership status = Membership::undecided;
  bool closure_applied = false;
  // Smallest tested epsilon whose closed class is Divergent (NaN if none):
  // below this radius the divergence evidence stops.
  double flip_epsilon = 0.0;

  bool member() const { return status == Membership::member; }
};

// Cluster-point test for a point x: at each radius the exponent of block n
// sums (|<u_{n,i}, x>| - eps)_+^2 c_n^2 / (2 n lambda_{n,i}^2) over the
// positive-eigenvalue directions; blocks where x sticks out of the
// eigenspace by eps or more in a zero-eigenvalue direction carry no mass.
MembershipVerdict point_membership(const std::vector<double>& x,
                                   const MomentModel& model,
                                   const NormalizerSeq& seq,
                                   const CriteriaConfig& cfg = {});

// Functional version: energies I(<u_{n,i}, f>)^{1/2} replace |<u,x>| and the
// zero-direction filter uses the sup norm of the projected path. For
// independent-component models the exponent uses the per-coordinate
// truncated variances directly, with no direction filter.
MembershipVerdict function_membership(const GridFn& f, const MomentModel& model,
                                      const NormalizerSeq& seq,
                                      const CriteriaConfig& cfg = {});

// Shape summary of the predicted cluster set: the global scale bracket,
// per-coordinate scale brackets, and a point sample of the limit shape A
// (eigendirection extremes, plus an ellipse ring in d = 2, or the star
// segment endpoints and midpoints for heavy-tail kinds).
struct PredictedSets {
  AlphaBracket alpha;
  std::vector<AlphaBracket> coordinate;
  std::vector<std::vector<double>> a_points;
};

PredictedSets predicted_sets(const MomentModel& model, const NormalizerSeq& seq,
                             const CriteriaConfig& cfg = {});

}  // namespace limset

#endif
