#include "limset/grid_fn.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "limset/errors.hpp"

namespace limset {

GridFn::GridFn(int dim, int n_grid)
    : dim_(dim), n_grid_(n_grid),
      values_(static_cast<std::size_t>(n_grid + 1) * dim, 0.0) {
  if (dim < 1) throw dimension_error("GridFn: dim must be >= 1");
  if (n_grid < 1) throw parameter_error("GridFn: n_grid must be >= 1");
}

GridFn::GridFn(int dim, int n_grid, std::vector<double> values)
    : dim_(dim), n_grid_(n_grid), values_(std::move(values)) {
  if (dim < 1) throw dimension_error("GridFn: dim must be >= 1");
  if (n_grid < 1) throw parameter_error("GridFn: n_grid must be >= 1");
  if (values_.size() != static_cast<std::size_t>(n_grid + 1) * dim)
    throw dimension_error("GridFn: values size does not match (n_grid+1)*dim");
  validate();
}

GridFn GridFn::scalar(std::vector<double> values) {
  if (values.size() < 2) throw parameter_error("GridFn::scalar: need at least 2 nodes");
  int n = static_cast<int>(values.size()) - 1;
  return GridFn(1, n, std::move(values));
}

GridFn GridFn::line(double slope, int n_grid) {
  GridFn f(1, n_grid);
  for (int i = 0; i <= n_grid; ++i) f.at(i, 0) = slope * f.t(i);
  return f;
}

std::vector<double> GridFn::eval(double t) const {
  t = std::clamp(t, 0.0, 1.0);
  double pos = t * n_grid_;
  int i = std::min(static_cast<int>(pos), n_grid_ - 1);
  double frac = pos - i;
  std::vector<double> out(dim_);
  for (int c = 0; c < dim_; ++c)
    out[c] = at(i, c) + frac * (at(i + 1, c) - at(i, c));
  return out;
}

double GridFn::eval_scalar(double t, int comp) const {
  t = std::clamp(t, 0.0, 1.0);
  double pos = t * n_grid_;
  int i = std::min(static_cast<int>(pos), n_grid_ - 1);
  double frac = pos - i;
  return at(i, comp) + frac * (at(i + 1, comp) - at(i, comp));
}

GridFn GridFn::component(int comp) const {
  if (comp < 0 || comp >= dim_) throw dimension_error("GridFn::component: index out of range");
  GridFn f(1, n_grid_);
  for (int i = 0; i <= n_grid_; ++i) f.at(i, 0) = at(i, comp);
  return f;
}

double GridFn::sup_norm() const {
  double best = 0.0;
  for (int i = 0; i <= n_grid_; ++i) {
    double s = 0.0;
    for (int c = 0; c < dim_; ++c) s += at(i, c) * at(i, c);
    best = std::max(best, s);
  }
  return std::sqrt(best);
}

void GridFn::validate() const {
  for (int c = 0; c < dim_; ++c)
    if (at(0, c) != 0.0)
      throw parameter_error("GridFn: node 0 must be at the origin");
  for (double v : values_)
    if (!std::isfinite(v)) throw parameter_error("GridFn: non-finite node value");
}

GridFn grid_fn_from_json(const std::string& json_text) {
  nlohmann::json j = nlohmann::json::parse(json_text);
  int dim = j.at("dim").get<int>();
  int n = j.at("n_grid").get<int>();
  std::vector<double> vals = j.at("values").get<std::vector<double>>();
  return GridFn(dim, n, std::move(vals));
}

std::string grid_fn_to_json(const GridFn& f) {
  nlohmann::json j;
  j["dim"] = f.dim();
  j["n_grid"] = f.n_grid();
  j["values"] = f.values();
  return j.dump();
}

GridFn grid_fn_from_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw parameter_error("GridFn csv: empty input");
  // header: t,f_1,...,f_d
  int dim = -1;
  {
    std::stringstream ss(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.empty() || cells[0] != "t")
      throw parameter_error("GridFn csv: header must start with 't'");
    dim = static_cast<int>(cells.size()) - 1;
    if (dim < 1) throw parameter_error("GridFn csv: no value columns");
  }
  std::vector<double> vals;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    int col = 0;
    while (std::getline(ss, cell, ',')) {
      if (col > 0) vals.push_back(std::stod(cell));
      ++col;
    }
    if (col != dim + 1) throw parameter_error("GridFn csv: ragged row");
    ++rows;
  }
  if (rows < 2) throw parameter_error("GridFn csv: need at least 2 rows");
  return GridFn(dim, static_cast<int>(rows) - 1, std::move(vals));
}

void grid_fn_to_csv(const GridFn& f, std::ostream& out) {
  out << "t";
  for (int c = 1; c <= f.dim(); ++c) out << ",f_" << c;
  out << "\n";
  char buf[32];
  for (int i = 0; i <= f.n_grid(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", f.t(i));
    out << buf;
    for (int c = 0; c < f.dim(); ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", f.at(i, c));
      out << "," << buf;
    }
    out << "\n";
  }
}

}  // namespace limset
