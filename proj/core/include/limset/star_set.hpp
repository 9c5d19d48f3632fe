#ifndef LIMSET_STAR_SET_HPP
#define LIMSET_STAR_SET_HPP

#include <string>
#include <vector>

namespace limset {

// One line segment {tau * sigma * z : |tau| <= 1} through the origin.
struct StarSegment {
  double sigma = 1.0;
  std::vector<double> z;  // unit direction
};

// Symmetric star-shaped union of line segments, the shape parameter of the
// heavy-tail ladder law. Ingestion sorts by sigma (descending), requires the
// leading sigma to be exactly 1, and pads the working list by repeating the
// leading segment until sigma_j^2 >= 1/j holds at every position. Padding
// repeats existing segments only, so the set itself is unchanged.
class StarSet {
 public:
  // Throws parameter_error if sigmas leave (0,1], directions are not unit
  // length (1e-9), dimensions disagree, or the largest sigma is not 1.
  static StarSet create(std::vector<StarSegment> segments);

  int dim() const { return dim_; }

  // Distinct segments as given (sorted by sigma descending).
  const std::vector<StarSegment>& segments() const { return segments_; }

  // Padded working list; entry j-1 satisfies sigma^2 >= 1/j. At least
  // min_len entries when requested via padded(min_len).
  const std::vector<StarSegment>& padded() const { return padded_; }
  std::vector<StarSegment> padded(std::size_t min_len) const;

  // Euclidean distance from a point to the union of segments.
  double dist(const std::vector<double>& p) const;

 private:
  int dim_ = 0;
  std::vector<StarSegment> segments_;
  std::vector<StarSegment> padded_;
};

}  // namespace limset

#endif
