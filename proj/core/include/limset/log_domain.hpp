#ifndef LIMSET_LOG_DOMAIN_HPP
#define LIMSET_LOG_DOMAIN_HPP

#include <algorithm>
#include <cmath>
#include <limits>

namespace limset {

// Signed log-domain scalar: value = sign * exp(ln_mag).
// sign == 0 encodes exact zero (ln_mag is then -inf by convention).
// Used where magnitudes leave the double range (block masses, tail
// probabilities); sums of same-signed terms go through log-sum-exp.
struct LogReal {
  int sign = 0;
  double ln_mag = -std::numeric_limits<double>::infinity();

  static LogReal zero() { return {}; }

  static LogReal from_double(double x) {
    if (x == 0.0) return {};
    return {x > 0 ? 1 : -1, std::log(std::fabs(x))};
  }

  static LogReal from_ln(double ln_mag, int sign = 1) {
    if (sign == 0) return {};
    return {sign > 0 ? 1 : -1, ln_mag};
  }

  bool is_zero() const { return sign == 0; }

  // Saturates to +/-inf outside the double range instead of throwing;
  // callers needing exactness must stay in the log domain.
  double to_double() const {
    if (sign == 0) return 0.0;
    return sign * std::exp(ln_mag);
  }

  LogReal operator*(const LogReal& o) const {
    if (sign == 0 || o.sign == 0) return {};
    return {sign * o.sign, ln_mag + o.ln_mag};
  }

  LogReal operator/(const LogReal& o) const {
    if (o.sign == 0) return {1, std::numeric_limits<double>::infinity()};
    if (sign == 0) return {};
    return {sign * o.sign, ln_mag - o.ln_mag};
  }

  LogReal operator-() const { return {-sign, ln_mag}; }
};

// a + b for log-domain values of arbitrary sign.
inline LogReal log_add(const LogReal& a, const LogReal& b) {
  if (a.sign == 0) return b;
  if (b.sign == 0) return a;
  const LogReal& hi = (a.ln_mag >= b.ln_mag) ? a : b;
  const LogReal& lo = (a.ln_mag >= b.ln_mag) ? b : a;
  double d = lo.ln_mag - hi.ln_mag;  // <= 0
  if (hi.sign == lo.sign) return {hi.sign, hi.ln_mag + std::log1p(std::exp(d))};
  double m = std::log1p(-std::exp(d));
  if (!std::isfinite(m) && d == 0.0) return {};  // exact cancellation
  return {hi.sign, hi.ln_mag + m};
}

inline bool log_less(const LogReal& a, const LogReal& b) {
  if (a.sign != b.sign) return a.sign < b.sign;
  if (a.sign == 0) return false;
  if (a.sign > 0) return a.ln_mag < b.ln_mag;
  return a.ln_mag > b.ln_mag;
}

// Accumulator for sums of nonnegative log-domain terms.
class LogSum {
 public:
  void add_ln(double ln_term) {
    if (ln_term == -std::numeric_limits<double>::infinity()) return;
    if (ln_term > max_) {
      if (max_ != -std::numeric_limits<double>::infinity())
        rest_ = rest_ * std::exp(max_ - ln_term) + 1.0;
      else
        rest_ = 1.0;
      max_ = ln_term;
    } else {
      rest_ += std::exp(ln_term - max_);
    }
  }

  void add(double x) {
    if (x > 0) add_ln(std::log(x));
  }

  bool empty() const { return max_ == -std::numeric_limits<double>::infinity(); }

  double ln_value() const {
    if (empty()) return -std::numeric_limits<double>::infinity();
    return max_ + std::log(rest_);
  }

  double value() const { return empty() ? 0.0 : std::exp(ln_value()); }

 private:
  double max_ = -std::numeric_limits<double>::infinity();
  double rest_ = 0.0;
};

}  // namespace limset

#endif
