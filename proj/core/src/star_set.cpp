#include "limset/star_set.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "limset/errors.hpp"

namespace limset {

StarSet StarSet::create(std::vector<StarSegment> segments) {
  if (segments.empty()) throw parameter_error("StarSet: at least one segment required");
  StarSet s;
  s.dim_ = static_cast<int>(segments.front().z.size());
  if (s.dim_ < 1) throw dimension_error("StarSet: empty direction");
  for (auto& seg : segments) {
    if (static_cast<int>(seg.z.size()) != s.dim_)
      throw dimension_error("StarSet: mixed segment dimensions");
    if (!(seg.sigma > 0.0) || seg.sigma > 1.0)
      throw parameter_error("StarSet: sigma must lie in (0, 1]");
    double n2 = 0.0;
    for (double v : seg.z) n2 += v * v;
    double n = std::sqrt(n2);
    if (std::fabs(n - 1.0) > 1e-9)
      throw parameter_error("StarSet: segment direction must be unit length");
    for (double& v : seg.z) v /= n;
  }
  std::stable_sort(segments.begin(), segments.end(),
                   [](const StarSegment& a, const StarSegment& b) { return a.sigma > b.sigma; });
  if (segments.front().sigma != 1.0)
    throw parameter_error("StarSet: leading sigma must equal 1 after sorting");
  s.segments_ = std::move(segments);

  // Pad: at position j (1-based) the working sigma must satisfy sigma^2 >= 1/j.
  // Candidates that fail are deferred; the leading segment fills the gap.
  std::size_t next = 0;
  for (std::size_t j = 1; next < s.segments_.size(); ++j) {
    const StarSegment& cand = s.segments_[next];
    if (cand.sigma * cand.sigma >= 1.0 / static_cast<double>(j)) {
      s.padded_.push_back(cand);
      ++next;
    } else {
      s.padded_.push_back(s.segments_.front());
    }
  }
  return s;
}

std::vector<StarSegment> StarSet::padded(std::size_t min_len) const {
  std::vector<StarSegment> out = padded_;
  while (out.size() < min_len) out.push_back(segments_.front());
  return out;
}

double StarSet::dist(const std::vector<double>& p) const {
  if (static_cast<int>(p.size()) != dim_)
    throw dimension_error("StarSet::dist: point dimension mismatch");
  double best = std::numeric_limits<double>::infinity();
  for (const auto& seg : segments_) {
    double dot = 0.0;
    for (int c = 0; c < dim_; ++c) dot += p[c] * seg.z[c];
    double tau = std::clamp(dot, -seg.sigma, seg.sigma);
    double d2 = 0.0;
    for (int c = 0; c < dim_; ++c) {
      double r = p[c] - tau * seg.z[c];
      d2 += r * r;
    }
    best = std::min(best, d2);
  }
  return std::sqrt(best);
}

}  // namespace limset
