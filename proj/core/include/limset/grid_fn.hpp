#ifndef LIMSET_GRID_FN_HPP
#define LIMSET_GRID_FN_HPP

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace limset {

// Piecewise-linear function [0,1] -> R^d on the uniform grid t_i = i/N,
// stored as N+1 node values, row-major (node-major) with d components per
// node. Node 0 is pinned to the origin.
class GridFn {
 public:
  GridFn() = default;
  GridFn(int dim, int n_grid);
  GridFn(int dim, int n_grid, std::vector<double> values);

  static GridFn scalar(std::vector<double> values);
  static GridFn line(double slope, int n_grid);  // d=1, t -> slope*t

  int dim() const { return dim_; }
  int n_grid() const { return n_grid_; }
  std::size_t n_nodes() const { return static_cast<std::size_t>(n_grid_) + 1; }

  double t(int i) const { return static_cast<double>(i) / n_grid_; }
  double at(int node, int comp) const { return values_[static_cast<std::size_t>(node) * dim_ + comp]; }
  double& at(int node, int comp) { return values_[static_cast<std::size_t>(node) * dim_ + comp]; }

  const std::vector<double>& values() const { return values_; }

  // Linear interpolation; t clamped to [0,1].
  std::vector<double> eval(double t) const;
  double eval_scalar(double t, int comp = 0) const;

  // Scalar function of one component.
  GridFn component(int comp) const;

  // max over nodes of the euclidean node norm; equals the interpolant's
  // sup norm since the norm is convex along each segment.
  double sup_norm() const;

  // Structural checks: node 0 at the origin, finite entries. Throws.
  void validate() const;

  bool operator==(const GridFn&) const = default;

 private:
  int dim_ = 0;
  int n_grid_ = 0;
  std::vector<double> values_;
};

// JSON object {"dim": d, "n_grid": N, "values": [...]} (row-major nodes).
GridFn grid_fn_from_json(const std::string& json_text);
std::string grid_fn_to_json(const GridFn& f);

// CSV with mandatory header "t,f_1,...,f_d"; one row per node.
GridFn grid_fn_from_csv(std::istream& in);
void grid_fn_to_csv(const GridFn& f, std::ostream& out);

}  // namespace limset

#endif
