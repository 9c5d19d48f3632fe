#ifndef LIMSET_MOMENT_MODEL_HPP
#define LIMSET_MOMENT_MODEL_HPP

#include <memory>
#include <string>
#include <vector>

#include "limset/block_ladder.hpp"
#include "limset/eigen_system.hpp"
#include "limset/log_domain.hpp"
#include "limset/rng_stream.hpp"
#include "limset/star_set.hpp"
#include "limset/sym_matrix.hpp"

namespace limset {

// Distribution descriptor for the i.i.d. steps X of the partial sums. All
// truncation levels are passed as ln t so that heavy-tailed levels never
// need to exist as raw doubles.
class MomentModel {
 public:
  virtual ~MomentModel() = default;

  virtual int dim() const = 0;
  virtual std::string kind() const = 0;

  // ln of the scalar truncated-second-moment envelope H(t); -inf when zero.
  // Gaussian: largest eigenvalue of trunc_cov. Independent components: max
  // coordinate truncated second moment. Heavy-tail ladder: the level
  // function H itself.
  virtual double ln_H(double ln_t) const = 0;

  // E[X X^T 1{|X| <= t}]. The independent-components kind truncates each
  // coordinate at t separately (the diagonal form its membership criteria
  // use); the other kinds truncate on the full norm |X|.
  virtual SymMatrix trunc_cov(double ln_t) const = 0;

  // E[X_i^2 1{...}] under the same truncation convention as trunc_cov.
  virtual double coord_trunc_var(int i, double ln_t) const = 0;

  // ln of an upper bound on P(|X| > t); exact where a closed form exists.
  virtual double ln_tail(double ln_t) const = 0;

  // Caching key for spectral data: epochs are constant exactly where the
  // model declares trunc_cov constant-enough to reuse (heavy-tail: between
  // level jumps; others: within a 2% geometric bracket of t, and everywhere
  // past the truncation cutoff where the covariance is constant).
  virtual std::size_t cov_epoch(double ln_t) const = 0;

  virtual bool can_sample() const = 0;
  // One draw of X written to out[0..dim).
  virtual void sample(RngStream& rng, double* out) const = 0;

  // count draws, row-major count x dim.
  std::vector<double> sample_batch(RngStream& rng, std::size_t count) const;
};

// Centered multivariate normal with the given covariance. Truncated second
// moments are exact: closed form in one active dimension, adaptive
// quadrature (tolerance 1e-10) in two or three, and the untruncated
// covariance once t >= 8 * sqrt(lambda_max) where the truncation deficit is
// below 1e-13. Four or more active dimensions below that cutoff are not
// supported.
class GaussianModel final : public MomentModel {
 public:
  explicit GaussianModel(SymMatrix cov);

  int dim() const override { return cov_.d; }
  std::string kind() const override { return "gaussian"; }
  double ln_H(double ln_t) const override;
  SymMatrix trunc_cov(double ln_t) const override;
  double coord_trunc_var(int i, double ln_t) const override;
  double ln_tail(double ln_t) const override;
  std::size_t cov_epoch(double ln_t) const override;
  bool can_sample() const override { return true; }
  void sample(RngStream& rng, double* out) const override;

  const SymMatrix& cov() const { return cov_; }

 private:
  // E[y_i^2 1{sum_j lambda_j y_j^2 <= t^2}] for each eigendirection.
  std::vector<double> truncated_weights(double t) const;

  SymMatrix cov_;
  EigenSystem spec_;
  std::vector<double> factor_;  // d x d, X = factor * (iid standard normals)
  double ln_cutoff_;            // ln(8 sqrt(lambda_max))
};

// One coordinate law of an independent-components model.
struct CoordinateLaw {
  enum class Kind { gaussian, discrete_symmetric, zero };
  struct Atom {
    double value;  // > 0; the law puts mass prob on +value and on -value
    double prob;
  };

  Kind kind = Kind::zero;
  double sigma = 0.0;
  std::vector<Atom> atoms;

  static CoordinateLaw gaussian_law(double sigma);
  static CoordinateLaw discrete_law(std::vector<Atom> atoms);
  static CoordinateLaw zero_law() { return {}; }

  double second_moment(double t) const;  // E[x^2 1{|x| <= t}]
  double full_second_moment() const;
  double tail(double t) const;  // P(|x| > t)
  double sample(RngStream& rng) const;
};

// Independent coordinates, each with its own symmetric law. trunc_cov is
// diagonal with per-coordinate truncation (the convention the
// independent-form membership criteria are stated in).
class IndependentModel final : public MomentModel {
 public:
  explicit IndependentModel(std::vector<CoordinateLaw> laws);

  int dim() const override { return static_cast<int>(laws_.size()); }
  std::string kind() const override { return "independent_components"; }
  double ln_H(double ln_t) const override;
  SymMatrix trunc_cov(double ln_t) const override;
  double coord_trunc_var(int i, double ln_t) const override;
  double ln_tail(double ln_t) const override;
  std::size_t cov_epoch(double ln_t) const override;
  bool can_sample() const override { return true; }
  void sample(RngStream& rng, double* out) const override;

  const std::vector<CoordinateLaw>& laws() const { return laws_; }

 private:
  std::vector<CoordinateLaw> laws_;
  double ln_cutoff_;  // beyond this, every coordinate is fully captured
};

// Heavy-tailed ladder law: a scalar Z supported on {0, +-exp(n)} at the
// ladder's jump positions, pushed onto the star's segments,
//   X = sigma_l z_l Z on the window exp(m_{k,l-1}) < |Z| <= exp(m_{k,l}),
// with the single bottom atom |Z| = exp(m_1) folded into the first window
// (so telescoped window masses add up to the full level H).
//
// exact mode answers analytic queries only; scaled mode (exponents
// compressed by kappa) additionally samples. Norm-truncated queries take
// ln t as a double; anchor-aligned exact queries go through
// trunc_cov_at_anchor, which truncates on |Z| at exp(m_{k,l}) and works in
// exponent arithmetic at any scale.
class Example8Model final : public MomentModel {
 public:
  enum class Mode { exact_log, scaled };

  Example8Model(StarSet star, Mode mode, int k_max, double kappa = 1.0);

  int dim() const override { return star_.dim(); }
  std::string kind() const override {
    return mode_ == Mode::exact_log ? "example8_exact" : "example8_scaled";
  }
  double ln_H(double ln_t) const override { return ladder_.ln_H(ln_t); }
  SymMatrix trunc_cov(double ln_t) const override;
  double coord_trunc_var(int i, double ln_t) const override;
  double ln_tail(double ln_t) const override;
  std::size_t cov_epoch(double ln_t) const override;
  bool can_sample() const override { return mode_ == Mode::scaled; }
  void sample(RngStream& rng, double* out) const override;

  const BlockLadder& ladder() const { return ladder_; }
  const StarSet& star() const { return star_; }
  // Window l (1-based) of every block uses segment l of this padded list.
  const std::vector<StarSegment>& window_segments() const {
    return window_segments_;
  }
  Mode mode() const { return mode_; }

  LogReal q_of(long long n) const { return ladder_.q_at_index(n); }
  LogReal q_of(const BlockPos& pos) const { return ladder_.q_at(pos); }
  BlockLadder::MassBound q_mass_bound(long long n_enum) const {
    return ladder_.q_mass_bound(n_enum);
  }
  std::vector<BlockLadder::IdentityCheck> verify_identities() const {
    return ladder_.verify_identities();
  }

  // |Z|-truncated covariance with t = exp(m_{k,l}): every window up to and
  // including the one landing at that anchor contributes its full mass.
  SymMatrix trunc_cov_at_anchor(int k, int l) const;
  double ln_H_at_anchor(int k, int l) const;

  // One draw of the pair (Z, X); sample() forwards here and drops Z.
  void sample_zx(RngStream& rng, double* z_out, double* x_out) const;

 private:
  StarSet star_;
  BlockLadder ladder_;
  std::vector<StarSegment> window_segments_;  // padded to k_max + 1 entries
  Mode mode_;
  struct AtomRow {  // one signed atom of Z
    double cum;     // cumulative probability including this atom
    double value;   // signed Z value
    int segment;
  };
  std::vector<AtomRow> atom_table_;
  double p_nonzero_;
};

std::unique_ptr<Example8Model> build_example8(StarSet star,
                                              Example8Model::Mode mode,
                                              int k_max, double kappa = 1.0);

// Declarative model configs:
//   {"kind":"gaussian","cov":[[...],...]}
//   {"kind":"independent_components","coordinate_laws":[
//       {"law":"gaussian","sigma":1.0},
//       {"law":"discrete_symmetric","atoms":[{"value":2.0,"prob":0.1}]},
//       {"law":"zero"}]}
//   {"kind":"example8_exact","star_set":{"segments":[{"sigma":1,"z":[1,0]}]},
//    "k_max":3}
//   {"kind":"example8_scaled", ..., "kappa":2.0, "k_max":3}
std::unique_ptr<MomentModel> model_from_json(const std::string& json_text);
StarSet star_from_json(const std::string& json_text);

}  // namespace limset

#endif
