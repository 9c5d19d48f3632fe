#include "limset/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "limset/errors.hpp"

namespace limset {

namespace {

using nlohmann::json;

json double_or_null(double v) {
  if (std::isnan(v)) return nullptr;
  return v;
}

double double_from(const json& j) {
  if (j.is_null()) return std::nan("");
  return j.get<double>();
}

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

void require_header(const std::string& got, const std::string& want,
                    const char* table) {
  if (got != want)
    throw parameter_error(std::string(table) + " csv: expected header '" + want +
                          "', got '" + got + "'");
}

long long parse_ll(const std::string& text, const char* table) {
  std::size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(text, &pos);
  } catch (const std::exception&) {
    throw parameter_error(std::string(table) + " csv: bad integer '" + text + "'");
  }
  if (pos != text.size())
    throw parameter_error(std::string(table) + " csv: bad integer '" + text + "'");
  return v;
}

// header for a point table with a fixed prefix and y0..y{d-1} columns
std::string y_header(const std::string& prefix, int dim) {
  std::string h = prefix;
  for (int c = 0; c < dim; ++c) {
    if (!h.empty()) h += ",";
    h += "y" + std::to_string(c);
  }
  return h;
}

int dim_from_header(const std::string& header, int fixed_cols,
                    const char* table) {
  int cols = static_cast<int>(split_row(header).size());
  int d = cols - fixed_cols;
  if (d < 1)
    throw parameter_error(std::string(table) + " csv: no y columns in header");
  return d;
}

SeriesClass series_class_from(const std::string& s) {
  if (s == "Divergent") return SeriesClass::divergent;
  if (s == "Convergent") return SeriesClass::convergent;
  if (s == "Undecided") return SeriesClass::undecided;
  throw parameter_error("unknown series class '" + s + "'");
}

Membership membership_from(const std::string& s) {
  if (s == "member") return Membership::member;
  if (s == "non-member") return Membership::non_member;
  if (s == "undecided") return Membership::undecided;
  throw parameter_error("unknown membership status '" + s + "'");
}

json config_to_json(const ClusterConfig& cfg) {
  json j;
  j["theta"] = cfg.theta;
  j["delta"] = cfg.delta;
  j["burn_in_exponent"] = cfg.burn_in_exponent;
  j["streams"] = cfg.streams;
  j["workers"] = cfg.workers;
  j["grid_size"] = cfg.grid_size;
  j["snapshot_count"] = cfg.snapshot_count;
  return j;
}

ClusterConfig config_from_json(const json& j) {
  ClusterConfig cfg;
  cfg.theta = j.at("theta").get<double>();
  cfg.delta = j.at("delta").get<double>();
  cfg.burn_in_exponent = j.at("burn_in_exponent").get<double>();
  cfg.streams = j.at("streams").get<int>();
  cfg.workers = j.at("workers").get<int>();
  cfg.grid_size = j.at("grid_size").get<int>();
  cfg.snapshot_count = j.at("snapshot_count").get<int>();
  return cfg;
}

json grid_to_json(const GridFn& f) {
  json j;
  j["dim"] = f.dim();
  j["n_grid"] = f.n_grid();
  j["values"] = f.values();
  return j;
}

GridFn grid_from_json(const json& j) {
  return GridFn(j.at("dim").get<int>(), j.at("n_grid").get<int>(),
                j.at("values").get<std::vector<double>>());
}

json bracket_to_json(const AlphaBracket& b) {
  json j;
  j["alpha0"] = b.alpha0;
  j["lo"] = b.lo;
  j["hi"] = b.hi;
  return j;
}

AlphaBracket bracket_from_json(const json& j) {
  AlphaBracket b;
  b.alpha0 = j.at("alpha0").get<double>();
  b.lo = j.at("lo").get<double>();
  b.hi = j.at("hi").get<double>();
  return b;
}

json verdict_to_json_obj(const MembershipVerdict& v) {
  json j;
  j["status"] = to_string(v.status);
  j["closure_applied"] = v.closure_applied;
  j["flip_epsilon"] = double_or_null(v.flip_epsilon);
  j["per_epsilon"] = json::array();
  for (const auto& e : v.per_epsilon) {
    json row;
    row["epsilon"] = e.epsilon;
    row["class"] = to_string(e.cls);
    row["raw"] = to_string(e.raw);
    row["fitted_s"] = e.fitted_s;
    j["per_epsilon"].push_back(std::move(row));
  }
  return j;
}

MembershipVerdict verdict_from_json_obj(const json& j) {
  MembershipVerdict v;
  v.status = membership_from(j.at("status").get<std::string>());
  v.closure_applied = j.at("closure_applied").get<bool>();
  v.flip_epsilon = double_from(j.at("flip_epsilon"));
  for (const auto& row : j.at("per_epsilon")) {
    EpsilonVerdict e;
    e.epsilon = row.at("epsilon").get<double>();
    e.cls = series_class_from(row.at("class").get<std::string>());
    e.raw = series_class_from(row.at("raw").get<std::string>());
    e.fitted_s = row.at("fitted_s").get<double>();
    v.per_epsilon.push_back(e);
  }
  return v;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& text) {
  if (text.empty()) throw parameter_error("csv: empty numeric cell");
  const char* s = text.c_str();
  char* end = nullptr;
  double v = std::strtod(s, &end);
  if (end != s + text.size())
    throw parameter_error("csv: bad number '" + text + "'");
  return v;
}

std::string cluster_report_to_json(const ClusterReport& report) {
  json j;
  j["n_max"] = report.n_max;
  j["seed"] = report.seed;
  j["config"] = config_to_json(report.config);
  j["checkpoints"] = report.checkpoints;
  j["burn_in"] = report.burn_in;
  j["points"] = json::array();
  for (const auto& p : report.points) {
    json row;
    row["stream"] = p.stream;
    row["n"] = p.n;
    row["y"] = p.y;
    j["points"].push_back(std::move(row));
  }
  j["net"] = report.net;
  j["snapshots"] = json::array();
  for (const auto& s : report.snapshots) {
    json row;
    row["stream"] = s.stream;
    row["n"] = s.n;
    row["path"] = grid_to_json(s.path);
    j["snapshots"].push_back(std::move(row));
  }
  return j.dump(2) + "\n";
}

ClusterReport cluster_report_from_json(const std::string& text) {
  try {
    json j = json::parse(text);
    ClusterReport r;
    r.n_max = j.at("n_max").get<long long>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.config = config_from_json(j.at("config"));
    r.checkpoints = j.at("checkpoints").get<std::vector<long long>>();
    r.burn_in = j.at("burn_in").get<long long>();
    for (const auto& row : j.at("points")) {
      ClusterPoint p;
      p.stream = row.at("stream").get<int>();
      p.n = row.at("n").get<long long>();
      p.y = row.at("y").get<std::vector<double>>();
      r.points.push_back(std::move(p));
    }
    r.net = j.at("net").get<std::vector<std::vector<double>>>();
    for (const auto& row : j.at("snapshots")) {
      PathSnapshot s;
      s.stream = row.at("stream").get<int>();
      s.n = row.at("n").get<long long>();
      s.path = grid_from_json(row.at("path"));
      r.snapshots.push_back(std::move(s));
    }
    return r;
  } catch (const json::exception& e) {
    throw parameter_error(std::string("cluster report json: ") + e.what());
  }
}

std::string cluster_points_to_csv(const std::vector<ClusterPoint>& points) {
  if (points.empty()) throw parameter_error("points csv: nothing to write");
  int d = static_cast<int>(points.front().y.size());
  std::string out = y_header("stream,n", d) + "\n";
  for (const auto& p : points) {
    if (static_cast<int>(p.y.size()) != d)
      throw dimension_error("points csv: mixed dimensions");
    out += std::to_string(p.stream) + "," + std::to_string(p.n);
    for (double v : p.y) out += "," + format_double(v);
    out += "\n";
  }
  return out;
}

std::vector<ClusterPoint> cluster_points_from_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw parameter_error("points csv: empty input");
  int d = dim_from_header(line, 2, "points");
  require_header(line, y_header("stream,n", d), "points");
  std::vector<ClusterPoint> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto cells = split_row(line);
    if (static_cast<int>(cells.size()) != d + 2)
      throw parameter_error("points csv: wrong column count in '" + line + "'");
    ClusterPoint p;
    p.stream = static_cast<int>(parse_ll(cells[0], "points"));
    p.n = parse_ll(cells[1], "points");
    for (int c = 0; c < d; ++c) p.y.push_back(parse_double(cells[2 + c]));
    out.push_back(std::move(p));
  }
  return out;
}

std::string net_to_csv(const std::vector<std::vector<double>>& net) {
  if (net.empty()) throw parameter_error("net csv: nothing to write");
  int d = static_cast<int>(net.front().size());
  std::string out = y_header("", d) + "\n";
  for (const auto& p : net) {
    if (static_cast<int>(p.size()) != d)
      throw dimension_error("net csv: mixed dimensions");
    for (int c = 0; c < d; ++c) {
      if (c) out += ",";
      out += format_double(p[c]);
    }
    out += "\n";
  }
  return out;
}

std::vector<std::vector<double>> net_from_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw parameter_error("net csv: empty input");
  int d = dim_from_header(line, 0, "net");
  require_header(line, y_header("", d), "net");
  std::vector<std::vector<double>> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto cells = split_row(line);
    if (static_cast<int>(cells.size()) != d)
      throw parameter_error("net csv: wrong column count in '" + line + "'");
    std::vector<double> p;
    for (const auto& c : cells) p.push_back(parse_double(c));
    out.push_back(std::move(p));
  }
  return out;
}

std::string snapshots_to_csv(const std::vector<PathSnapshot>& snapshots) {
  if (snapshots.empty()) throw parameter_error("snapshots csv: nothing to write");
  int d = snapshots.front().path.dim();
  std::string out = y_header("stream,n,node", d) + "\n";
  for (const auto& s : snapshots) {
    if (s.path.dim() != d)
      throw dimension_error("snapshots csv: mixed dimensions");
    for (int i = 0; i <= s.path.n_grid(); ++i) {
      out += std::to_string(s.stream) + "," + std::to_string(s.n) + "," +
             std::to_string(i);
      for (int c = 0; c < d; ++c) out += "," + format_double(s.path.at(i, c));
      out += "\n";
    }
  }
  return out;
}

std::vector<PathSnapshot> snapshots_from_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line))
    throw parameter_error("snapshots csv: empty input");
  int d = dim_from_header(line, 3, "snapshots");
  require_header(line, y_header("stream,n,node", d), "snapshots");

  std::vector<PathSnapshot> out;
  std::vector<double> vals;
  int cur_stream = 0;
  long long cur_n = -1;
  int next_node = 0;
  auto flush = [&]() {
    if (cur_n < 0) return;
    if (next_node < 2)
      throw parameter_error("snapshots csv: path needs at least nodes 0 and 1");
    out.push_back(PathSnapshot{cur_stream, cur_n,
                               GridFn(d, next_node - 1, std::move(vals))});
    vals = {};
  };
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto cells = split_row(line);
    if (static_cast<int>(cells.size()) != d + 3)
      throw parameter_error("snapshots csv: wrong column count in '" + line + "'");
    int stream = static_cast<int>(parse_ll(cells[0], "snapshots"));
    long long n = parse_ll(cells[1], "snapshots");
    int node = static_cast<int>(parse_ll(cells[2], "snapshots"));
    if (n != cur_n || stream != cur_stream) {
      flush();
      cur_stream = stream;
      cur_n = n;
      next_node = 0;
    }
    if (node != next_node)
      throw parameter_error("snapshots csv: nodes out of order in '" + line + "'");
    ++next_node;
    for (int c = 0; c < d; ++c) vals.push_back(parse_double(cells[3 + c]));
  }
  flush();
  return out;
}

std::string verdicts_to_json(const std::vector<QueryVerdict>& rows) {
  json j = json::array();
  for (const auto& r : rows) {
    json row;
    row["query"] = r.query;
    row["verdict"] = verdict_to_json_obj(r.verdict);
    j.push_back(std::move(row));
  }
  return j.dump(2) + "\n";
}

std::vector<QueryVerdict> verdicts_from_json(const std::string& text) {
  try {
    json j = json::parse(text);
    std::vector<QueryVerdict> out;
    for (const auto& row : j) {
      QueryVerdict r;
      r.query = row.at("query").get<std::string>();
      r.verdict = verdict_from_json_obj(row.at("verdict"));
      out.push_back(std::move(r));
    }
    return out;
  } catch (const json::exception& e) {
    throw parameter_error(std::string("verdicts json: ") + e.what());
  }
}

std::string verdicts_to_csv(const std::vector<QueryVerdict>& rows) {
  std::string out =
      "query,epsilon,class,raw,fitted_s,status,flip_epsilon,closure_applied\n";
  for (const auto& r : rows) {
    if (r.query.find(',') != std::string::npos ||
        r.query.find('\n') != std::string::npos)
      throw parameter_error("verdicts csv: query labels must not contain "
                            "commas or newlines");
    for (const auto& e : r.verdict.per_epsilon) {
      out += r.query + "," + format_double(e.epsilon) + "," +
             to_string(e.cls) + "," + to_string(e.raw) + "," +
             format_double(e.fitted_s) + "," + to_string(r.verdict.status) +
             "," + format_double(r.verdict.flip_epsilon) + "," +
             (r.verdict.closure_applied ? "true" : "false") + "\n";
    }
  }
  return out;
}

std::vector<QueryVerdict> verdicts_from_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw parameter_error("verdicts csv: empty input");
  require_header(
      line, "query,epsilon,class,raw,fitted_s,status,flip_epsilon,closure_applied",
      "verdicts");
  std::vector<QueryVerdict> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto cells = split_row(line);
    if (cells.size() != 8)
      throw parameter_error("verdicts csv: wrong column count in '" + line + "'");
    if (out.empty() || out.back().query != cells[0]) {
      QueryVerdict r;
      r.query = cells[0];
      r.verdict.status = membership_from(cells[5]);
      r.verdict.flip_epsilon = parse_double(cells[6]);
      if (cells[7] != "true" && cells[7] != "false")
        throw parameter_error("verdicts csv: bad boolean '" + cells[7] + "'");
      r.verdict.closure_applied = cells[7] == "true";
      out.push_back(std::move(r));
    }
    EpsilonVerdict e;
    e.epsilon = parse_double(cells[1]);
    e.cls = series_class_from(cells[2]);
    e.raw = series_class_from(cells[3]);
    e.fitted_s = parse_double(cells[4]);
    out.back().verdict.per_epsilon.push_back(e);
  }
  return out;
}

std::string predicted_sets_to_json(const PredictedSets& sets) {
  json j;
  j["alpha"] = bracket_to_json(sets.alpha);
  j["coordinate"] = json::array();
  for (const auto& b : sets.coordinate)
    j["coordinate"].push_back(bracket_to_json(b));
  j["a_points"] = sets.a_points;
  return j.dump(2) + "\n";
}

PredictedSets predicted_sets_from_json(const std::string& text) {
  try {
    json j = json::parse(text);
    PredictedSets sets;
    sets.alpha = bracket_from_json(j.at("alpha"));
    for (const auto& b : j.at("coordinate"))
      sets.coordinate.push_back(bracket_from_json(b));
    sets.a_points = j.at("a_points").get<std::vector<std::vector<double>>>();
    return sets;
  } catch (const json::exception& e) {
    throw parameter_error(std::string("predicted sets json: ") + e.what());
  }
}

std::string containment_to_json(const ContainmentSummary& sum) {
  json j;
  j["tol"] = sum.tol;
  j["upper_dist"] = sum.upper_dist;
  j["max_upper_dist"] = sum.max_upper_dist;
  j["upper_violations"] = sum.upper_violations;
  j["probe_count"] = sum.probe_count;
  j["probes_covered"] = sum.probes_covered;
  j["coverage"] = sum.coverage;
  j["probes_flagged_empty"] = sum.probes_flagged_empty;
  j["snapshots_empty"] = sum.snapshots_empty;
  j["max_sqrt_excess"] = sum.max_sqrt_excess;
  j["sqrt_violations"] = sum.sqrt_violations;
  return j.dump(2) + "\n";
}

ContainmentSummary containment_from_json(const std::string& text) {
  try {
    json j = json::parse(text);
    ContainmentSummary sum;
    sum.tol = j.at("tol").get<double>();
    sum.upper_dist = j.at("upper_dist").get<std::vector<double>>();
    sum.max_upper_dist = j.at("max_upper_dist").get<double>();
    sum.upper_violations = j.at("upper_violations").get<long long>();
    sum.probe_count = j.at("probe_count").get<long long>();
    sum.probes_covered = j.at("probes_covered").get<long long>();
    sum.coverage = j.at("coverage").get<double>();
    sum.probes_flagged_empty = j.at("probes_flagged_empty").get<bool>();
    sum.snapshots_empty = j.at("snapshots_empty").get<bool>();
    sum.max_sqrt_excess = j.at("max_sqrt_excess").get<double>();
    sum.sqrt_violations = j.at("sqrt_violations").get<long long>();
    return sum;
  } catch (const json::exception& e) {
    throw parameter_error(std::string("containment json: ") + e.what());
  }
}

}  // namespace limset
