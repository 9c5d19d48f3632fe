#include "limset/normalizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "limset/errors.hpp"

namespace limset {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt_ln_n(double ln_n) {
  std::ostringstream os;
  if (ln_n < 34.5) {  // n below ~1e15: show the count itself
    os << "n=" << std::llround(std::exp(ln_n));
  } else {
    os << "ln n=" << ln_n;
  }
  return os.str();
}

}  // namespace

NormalizerSeq NormalizerSeq::sqrt_2n_loglog() {
  NormalizerSeq s;
  s.family_ = "sqrt_2n_loglog";
  s.p_ = 0.5;
  return s;
}

NormalizerSeq NormalizerSeq::sqrt_2n_loglog_pow(double p) {
  if (!std::isfinite(p) || p < 0.0)
    throw parameter_error("normalizer: log log power must be finite and >= 0");
  NormalizerSeq s;
  s.family_ = "sqrt_2n_loglog_pow";
  s.p_ = p;
  return s;
}

NormalizerSeq NormalizerSeq::custom(std::vector<std::pair<double, double>> ln_table) {
  if (ln_table.size() < 2)
    throw parameter_error("normalizer: custom table needs at least 2 rows");
  for (std::size_t i = 0; i < ln_table.size(); ++i) {
    if (!std::isfinite(ln_table[i].first) || !std::isfinite(ln_table[i].second))
      throw parameter_error("normalizer: custom table entries must be finite");
    if (i > 0 && !(ln_table[i].first > ln_table[i - 1].first))
      throw parameter_error("normalizer: custom table must be strictly increasing in ln n");
  }
  NormalizerSeq s;
  s.family_ = "custom";
  s.p_ = std::numeric_limits<double>::quiet_NaN();
  s.table_ = std::move(ln_table);
  s.rate_table_.reserve(s.table_.size());
  for (const auto& row : s.table_)
    s.rate_table_.emplace_back(row.first, 2.0 * row.second - M_LN2 - row.first);
  return s;
}

namespace {

// linear interpolation over an ascending-(first) table, range-checked
double interp_table(const std::vector<std::pair<double, double>>& table, double ln_n) {
  if (ln_n < table.front().first || ln_n > table.back().first) {
    std::ostringstream os;
    os << "normalizer: ln n=" << ln_n << " outside tabulated range ["
       << table.front().first << ", " << table.back().first << "]";
    throw parameter_error(os.str());
  }
  auto it = std::upper_bound(table.begin(), table.end(), ln_n,
                             [](double v, const std::pair<double, double>& row) {
                               return v < row.first;
                             });
  if (it == table.begin()) ++it;
  if (it == table.end()) --it;
  auto lo = *(it - 1);
  auto hi = *it;
  double t = (ln_n - lo.first) / (hi.first - lo.first);
  return lo.second + t * (hi.second - lo.second);
}

}  // namespace

double NormalizerSeq::ln_c(double ln_n) const {
  if (std::isnan(ln_n)) throw parameter_error("normalizer: ln n is NaN");
  if (family_ == "custom") return interp_table(table_, ln_n);
  if (!(ln_n > 1.0))
    throw parameter_error("normalizer: needs ln n > 1 (log log n > 0)");
  // ln c = (ln 2 + ln n)/2 + p ln ln ln n
  return 0.5 * (M_LN2 + ln_n) + p_ * std::log(std::log(ln_n));
}

double NormalizerSeq::ln_rate(double ln_n) const {
  if (std::isnan(ln_n)) throw parameter_error("normalizer: ln n is NaN");
  if (family_ == "custom") return interp_table(rate_table_, ln_n);
  if (!(ln_n > 1.0))
    throw parameter_error("normalizer: needs ln n > 1 (log log n > 0)");
  // ln(c^2/(2n)) = 2p ln ln ln n
  return 2.0 * p_ * std::log(std::log(ln_n));
}

std::pair<double, double> NormalizerSeq::ln_range() const {
  if (family_ == "custom") return {table_.front().first, table_.back().first};
  return {std::log(3.0), kInf};
}

std::vector<NormalizerSeq::CheckItem> NormalizerSeq::validate(double ln_n_min,
                                                              double ln_n_max) const {
  auto range = ln_range();
  double lo = std::max(ln_n_min, range.first);
  double hi = std::min(ln_n_max, range.second);
  if (!(lo < hi))
    throw parameter_error("normalizer: empty validation range");
  if (!(lo > 1.0)) lo = std::nextafter(1.0, 2.0) + 0.1;

  constexpr int kProbes = 512;
  std::vector<double> ln_n(kProbes), phi(kProbes), psi(kProbes);
  for (int j = 0; j < kProbes; ++j) {
    ln_n[j] = lo + (hi - lo) * j / (kProbes - 1);
    double lr = ln_rate(ln_n[j]);
    phi[j] = 0.5 * (lr + M_LN2);             // ln of c_n / sqrt(n)
    psi[j] = 0.5 * (lr + M_LN2 - ln_n[j]);   // ln of c_n / n
  }

  std::vector<CheckItem> out;

  // growth: c_n / sqrt(n) nondecreasing, and unbounded (factor >= 1.5
  // across the probed range as a finite-range proxy).
  {
    CheckItem item;
    item.name = "growth";
    int bad = -1;
    for (int j = 0; j + 1 < kProbes; ++j)
      if (phi[j + 1] < phi[j] - 1e-12) {
        bad = j;
        break;
      }
    double factor = std::exp(phi[kProbes - 1] - phi[0]);
    std::ostringstream os;
    if (bad >= 0) {
      item.pass = false;
      os << "c_n/sqrt(n) decreases between " << fmt_ln_n(ln_n[bad]) << " and "
         << fmt_ln_n(ln_n[bad + 1]);
    } else if (factor < 1.5) {
      item.pass = false;
      os << "c_n/sqrt(n) grows only by factor " << factor
         << " across the range (threshold 1.5); not unbounded";
    } else {
      item.pass = true;
      os << "nondecreasing, factor " << factor << " across the range";
    }
    item.detail = os.str();
    out.push_back(std::move(item));
  }

  // regularity(eps): smallest probe m such that for every pair
  // n > m' >= m, c_n / c_m' <= (1+eps) n / m'. With psi = ln(c_n / n)
  // this is: psi never rises by more than ln(1+eps) after m.
  for (double eps : {0.5, 0.1, 0.01}) {
    CheckItem item;
    std::ostringstream name;
    name << "regularity(eps=" << eps << ")";
    item.name = name.str();

    std::vector<double> suffix_max(kProbes);
    suffix_max[kProbes - 1] = psi[kProbes - 1];
    for (int j = kProbes - 2; j >= 0; --j)
      suffix_max[j] = std::max(psi[j], suffix_max[j + 1]);

    double bound = std::log1p(eps);
    int last_bad = -1;
    for (int j = 0; j + 1 < kProbes; ++j)
      if (suffix_max[j + 1] > psi[j] + bound) last_bad = j;

    // An admissible start must leave real headroom: near the top of the
    // range the remaining tail is too short to violate the ratio bound,
    // so a start found only there is finite-range noise, not regularity.
    int first_ok = last_bad + 1;
    std::ostringstream os;
    if (first_ok >= kProbes / 2) {
      item.pass = false;
      os << "c_n/c_m exceeds (1+eps) n/m past " << fmt_ln_n(ln_n[std::max(last_bad, 0)])
         << "; no admissible start in the lower half of the range";
    } else {
      item.pass = true;
      os << "holds from " << fmt_ln_n(ln_n[first_ok]) << " onward";
    }
    item.detail = os.str();
    out.push_back(std::move(item));
  }

  return out;
}

NormalizerSeq normalizer_from_json(const std::string& json_text) {
  try {
    auto j = nlohmann::json::parse(json_text);
    std::string family = j.at("family").get<std::string>();
    if (family == "sqrt_2n_loglog") return NormalizerSeq::sqrt_2n_loglog();
    if (family == "sqrt_2n_loglog_pow")
      return NormalizerSeq::sqrt_2n_loglog_pow(j.at("p").get<double>());
    if (family == "custom") {
      std::vector<std::pair<double, double>> table;
      for (const auto& row : j.at("ln_table")) {
        if (!row.is_array() || row.size() != 2)
          throw config_error("normalizer: ln_table rows must be [ln_n, ln_c]");
        table.emplace_back(row[0].get<double>(), row[1].get<double>());
      }
      return NormalizerSeq::custom(std::move(table));
    }
    throw config_error("normalizer: unknown family '" + family + "'");
  } catch (const nlohmann::json::exception& e) {
    throw config_error(std::string("normalizer: bad config: ") + e.what());
  }
}

}  // namespace limset
