#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "limset/errors.hpp"

namespace limset_cli {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

const char* stream_color(int stream) {
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                  "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
  return palette[stream % 8];
}

struct Frame {
  double size;    // drawable pixels per axis
  double margin;  // pixels on each side
  double lo;      // data value at the left/bottom edge
  double hi;

  double x(double v) const {
    return margin + (v - lo) / (hi - lo) * size;
  }
  // svg y grows downward
  double y(double v) const {
    return margin + (hi - v) / (hi - lo) * size;
  }
};

}  // namespace

std::string scatter_svg(const limset::ClusterReport& report,
                        const limset::PredictedSets& sets,
                        const limset::MomentModel& model) {
  if (model.dim() != 2)
    throw limset::dimension_error("scatter plot needs a 2-dimensional model");

  double reach = 1.0;
  for (const auto& p : report.points)
    reach = std::max({reach, std::fabs(p.y[0]), std::fabs(p.y[1])});
  for (const auto& a : sets.a_points)
    reach = std::max({reach, std::fabs(a[0]), std::fabs(a[1])});
  reach *= 1.15;

  Frame fr{560.0, 40.0, -reach, reach};
  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"640\" "
       "viewBox=\"0 0 640 640\">\n";
  s += "<rect width=\"640\" height=\"640\" fill=\"white\"/>\n";

  // axes through the origin
  s += "<line x1=\"" + num(fr.x(-reach)) + "\" y1=\"" + num(fr.y(0)) +
       "\" x2=\"" + num(fr.x(reach)) + "\" y2=\"" + num(fr.y(0)) +
       "\" stroke=\"#cccccc\"/>\n";
  s += "<line x1=\"" + num(fr.x(0)) + "\" y1=\"" + num(fr.y(-reach)) +
       "\" x2=\"" + num(fr.x(0)) + "\" y2=\"" + num(fr.y(reach)) +
       "\" stroke=\"#cccccc\"/>\n";

  // retained visits
  for (const auto& p : report.points)
    s += "<circle cx=\"" + num(fr.x(p.y[0])) + "\" cy=\"" + num(fr.y(p.y[1])) +
         "\" r=\"1.5\" fill=\"#b0b0b0\" fill-opacity=\"0.6\"/>\n";

  // thinned net
  for (const auto& p : report.net)
    s += "<circle cx=\"" + num(fr.x(p[0])) + "\" cy=\"" + num(fr.y(p[1])) +
         "\" r=\"3.5\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\"/>\n";

  // predicted limit shape
  const std::string kind = model.kind();
  const char* style = "fill=\"none\" stroke=\"#d62728\" stroke-width=\"1.5\" "
                      "stroke-dasharray=\"6 4\"";
  if (kind.rfind("example8", 0) == 0) {
    for (const auto& a : sets.a_points)
      s += "<line x1=\"" + num(fr.x(0)) + "\" y1=\"" + num(fr.y(0)) +
           "\" x2=\"" + num(fr.x(a[0])) + "\" y2=\"" + num(fr.y(a[1])) + "\" " +
           style + "/>\n";
  } else if (kind == "independent_components") {
    double ax = sets.coordinate.size() > 0 ? sets.coordinate[0].alpha0 : 0.0;
    double ay = sets.coordinate.size() > 1 ? sets.coordinate[1].alpha0 : 0.0;
    s += "<rect x=\"" + num(fr.x(-ax)) + "\" y=\"" + num(fr.y(ay)) +
         "\" width=\"" + num(fr.x(ax) - fr.x(-ax)) + "\" height=\"" +
         num(fr.y(-ay) - fr.y(ay)) + "\" " + style + "/>\n";
  } else {
    // ellipse boundary: the predicted extreme points sorted by angle
    auto ring = sets.a_points;
    std::sort(ring.begin(), ring.end(),
              [](const std::vector<double>& a, const std::vector<double>& b) {
                return std::atan2(a[1], a[0]) < std::atan2(b[1], b[0]);
              });
    if (!ring.empty()) {
      std::string pts;
      for (const auto& a : ring)
        pts += num(fr.x(a[0])) + "," + num(fr.y(a[1])) + " ";
      pts += num(fr.x(ring[0][0])) + "," + num(fr.y(ring[0][1]));
      s += "<polyline points=\"" + pts + "\" " + style + "/>\n";
    }
  }

  // scale caption
  s += "<text x=\"" + num(fr.x(reach / 1.15)) + "\" y=\"" +
       num(fr.y(0) - 6.0) + "\" font-size=\"12\" fill=\"#666666\">" +
       num(reach / 1.15) + "</text>\n";
  s += "</svg>\n";
  return s;
}

std::string paths_svg(const std::vector<limset::PathSnapshot>& snapshots) {
  if (snapshots.empty())
    throw limset::parameter_error("path plot: no snapshots to draw");
  const int d = snapshots.front().path.dim();

  double reach = 0.1;
  for (const auto& snap : snapshots)
    for (int i = 0; i <= snap.path.n_grid(); ++i)
      for (int c = 0; c < d; ++c)
        reach = std::max(reach, std::fabs(snap.path.at(i, c)));
  reach *= 1.1;

  const double panel_h = 180.0, margin = 40.0, width = 640.0;
  const double plot_w = width - 2.0 * margin;
  double height = margin + d * (panel_h + margin);

  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width) +
       "\" height=\"" + num(height) + "\" viewBox=\"0 0 " + num(width) + " " +
       num(height) + "\">\n";
  s += "<rect width=\"" + num(width) + "\" height=\"" + num(height) +
       "\" fill=\"white\"/>\n";

  for (int c = 0; c < d; ++c) {
    double top = margin + c * (panel_h + margin);
    double mid = top + panel_h / 2.0;
    auto ypix = [&](double v) { return mid - v / reach * (panel_h / 2.0); };

    s += "<line x1=\"" + num(margin) + "\" y1=\"" + num(mid) + "\" x2=\"" +
         num(margin + plot_w) + "\" y2=\"" + num(mid) +
         "\" stroke=\"#cccccc\"/>\n";
    s += "<text x=\"" + num(margin) + "\" y=\"" + num(top - 8.0) +
         "\" font-size=\"12\" fill=\"#666666\">coordinate " +
         std::to_string(c) + " (half-range " + num(reach) + ")</text>\n";

    for (const auto& snap : snapshots) {
      std::string pts;
      for (int i = 0; i <= snap.path.n_grid(); ++i) {
        double x = margin + snap.path.t(i) * plot_w;
        pts += num(x) + "," + num(ypix(snap.path.at(i, c))) + " ";
      }
      s += "<polyline points=\"" + pts + "\" fill=\"none\" stroke=\"" +
           stream_color(snap.stream) + "\" stroke-width=\"1\" "
           "stroke-opacity=\"0.8\"/>\n";
    }
  }
  s += "</svg>\n";
  return s;
}

}  // namespace limset_cli
