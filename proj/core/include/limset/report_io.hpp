#ifndef LIMSET_REPORT_IO_HPP
#define LIMSET_REPORT_IO_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "limset/criteria.hpp"
#include "limset/simulate.hpp"

namespace limset {

// Serialization for run artifacts. Two carriers:
//   - JSON documents for full-fidelity reports,
//   - CSV tables (comma separator, '.' decimal point, mandatory header
//     row) for the flat views.
// Every number is written in shortest-round-trip form, so
// parse(emit(x)) == x and emit(parse(emit(x))) is byte-identical; NaN
// appears as null in JSON and as "nan" in CSV.

std::string format_double(double v);
double parse_double(const std::string& text);

std::string cluster_report_to_json(const ClusterReport& report);
ClusterReport cluster_report_from_json(const std::string& text);

// columns: stream,n,y0..y{d-1}
std::string cluster_points_to_csv(const std::vector<ClusterPoint>& points);
std::vector<ClusterPoint> cluster_points_from_csv(std::istream& in);

// columns: y0..y{d-1}
std::string net_to_csv(const std::vector<std::vector<double>>& net);
std::vector<std::vector<double>> net_from_csv(std::istream& in);

// columns: stream,n,node,y0..y{d-1}; nodes run 0..grid per (stream, n)
std::string snapshots_to_csv(const std::vector<PathSnapshot>& snapshots);
std::vector<PathSnapshot> snapshots_from_csv(std::istream& in);

// A membership verdict tagged with the query it answers (e.g. "point[3]").
struct QueryVerdict {
  std::string query;
  MembershipVerdict verdict;
};

std::string verdicts_to_json(const std::vector<QueryVerdict>& rows);
std::vector<QueryVerdict> verdicts_from_json(const std::string& text);

// One CSV row per (query, epsilon); the per-query fields repeat, so the
// table parses back into the exact QueryVerdict list.
// columns: query,epsilon,class,raw,fitted_s,status,flip_epsilon,closure_applied
std::string verdicts_to_csv(const std::vector<QueryVerdict>& rows);
std::vector<QueryVerdict> verdicts_from_csv(std::istream& in);

std::string predicted_sets_to_json(const PredictedSets& sets);
PredictedSets predicted_sets_from_json(const std::string& text);

std::string containment_to_json(const ContainmentSummary& sum);
ContainmentSummary containment_from_json(const std::string& text);

}  // namespace limset

#endif
