#ifndef LIMSET_CLI_SVG_HPP
#define LIMSET_CLI_SVG_HPP

#include <string>

#include "limset/criteria.hpp"
#include "limset/moment_model.hpp"
#include "limset/simulate.hpp"

namespace limset_cli {

// Static scatter of the retained normalized sums (d = 2 only): visits in
// grey, the thinned net highlighted, and the predicted limit shape overlaid
// (ellipse ring for the gaussian kind, origin-anchored segments for the
// heavy-tail star, coordinate box otherwise). Throws dimension_error for
// d != 2.
std::string scatter_svg(const limset::ClusterReport& report,
                        const limset::PredictedSets& sets,
                        const limset::MomentModel& model);

// Path snapshots per coordinate, one panel per coordinate, colored by
// stream. Throws parameter_error when there are no snapshots.
std::string paths_svg(const std::vector<limset::PathSnapshot>& snapshots);

}  // namespace limset_cli

#endif
