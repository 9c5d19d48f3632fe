#ifndef LIMSET_NORMALIZER_HPP
#define LIMSET_NORMALIZER_HPP

#include <string>
#include <utility>
#include <vector>

namespace limset {

// Normalizing sequence c_n, evaluated through logarithms so counts far
// past double range stay usable. Families:
//   sqrt_2n_loglog         c_n = sqrt(2 n log log n)
//   sqrt_2n_loglog_pow(p)  c_n = sqrt(2n) (log log n)^p
//   custom                 tabulated (ln n, ln c) pairs, linear interpolation
// The closed-form families require ln n > 1 (log log n > 0, i.e. n >= 3).
class NormalizerSeq {
 public:
  static NormalizerSeq sqrt_2n_loglog();
  static NormalizerSeq sqrt_2n_loglog_pow(double p);
  static NormalizerSeq custom(std::vector<std::pair<double, double>> ln_table);

  double ln_c(double ln_n) const;

  // ln(c_n^2 / (2n)), the per-block decay rate used by the series criteria.
  // Computed in closed form: naively taking 2 ln_c - ln 2 - ln n loses the
  // entire iterated-log contribution to rounding once ln n exceeds ~1e15,
  // because that contribution sits below the ulp of ln n. For the custom
  // family the rate is interpolated from per-node offsets ln_c - ln sqrt(2n),
  // so the cancellation happens once at the table nodes (where precision is
  // bounded by the caller's data anyway), never at evaluation points.
  double ln_rate(double ln_n) const;

  const std::string& family() const { return family_; }
  double power() const { return p_; }  // log log power; NaN for custom

  // Tabulated validity range as [ln n_lo, ln n_hi]; closed-form families
  // report (log 3, +inf).
  std::pair<double, double> ln_range() const;

  struct CheckItem {
    std::string name;
    bool pass = false;
    std::string detail;
  };
  // Sequence checks over a probe grid on [ln_n_min, ln_n_max]:
  //  - "growth": c_n / sqrt(n) nondecreasing and growing without bound
  //    (proxy: factor >= 1.5 across the range);
  //  - "regularity(eps)" for eps in {0.5, 0.1, 0.01}: reports the smallest
  //    probe m with c_n / c_m <= (1 + eps) n / m for every n > m >= m_eps.
  std::vector<CheckItem> validate(double ln_n_min, double ln_n_max) const;

 private:
  NormalizerSeq() = default;
  std::string family_;
  double p_ = 0.0;
  std::vector<std::pair<double, double>> table_;       // custom only, ascending ln n
  std::vector<std::pair<double, double>> rate_table_;  // custom only: (ln n, ln rate)
};

// {"family": "sqrt_2n_loglog"}
// {"family": "sqrt_2n_loglog_pow", "p": 1.0}
// {"family": "custom", "ln_table": [[ln_n, ln_c], ...]}
NormalizerSeq normalizer_from_json(const std::string& json_text);

}  // namespace limset

#endif
