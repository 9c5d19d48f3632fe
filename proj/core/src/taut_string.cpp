#include "limset/taut_string.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "limset/errors.hpp"

namespace limset {

double dirichlet_energy(const GridFn& f) {
  const int N = f.n_grid();
  double acc = 0.0;
  for (int i = 1; i <= N; ++i)
    for (int c = 0; c < f.dim(); ++c) {
      double d = f.at(i, c) - f.at(i - 1, c);
      acc += d * d;
    }
  return acc * N;
}

namespace {

void fill_segment(GridFn& h, int a, double ya, int b, double yb) {
  for (int i = a + 1; i <= b; ++i)
    h.at(i, 0) = ya + (yb - ya) * (i - a) / static_cast<double>(b - a);
}

}  // namespace

// Funnel walk. From the current anchor the feasible straight-line slope
// corridor [s_lo, s_hi] over the remaining tube is narrowed point by point;
// when it closes, the string is forced onto the wall whose constraint was
// binding, the anchor moves there, and the walk restarts from that node.
// When the corridor stays open to the right edge, the final run takes the
// slope of smallest magnitude the corridor allows (the free right endpoint),
// bending on whichever wall still blocks a flatter run. Ties in the corridor
// extremes keep the leftmost node, so contacts resolve left to right; the
// minimizer is unique, so the walk order does not affect the result.
TubeSolution taut_string(const GridFn& g, double eps) {
  if (g.dim() != 1) throw dimension_error("taut_string: scalar input required");
  if (eps < 0) throw parameter_error("taut_string: eps must be >= 0");
  const int N = g.n_grid();

  TubeSolution sol;
  sol.epsilon = eps;
  if (eps == 0.0) {
    sol.minimizer = g;
    sol.energy = dirichlet_energy(g);
    return sol;
  }

  GridFn h(1, N);
  int a = 0;
  double ya = 0.0;
  const double inf = std::numeric_limits<double>::infinity();

  while (a < N) {
    double s_lo = -inf, s_hi = inf;
    int j_lo = -1, j_hi = -1;
    int bend = -1;
    double bend_y = 0.0;
    bool on_floor = false;

    for (int j = a + 1; j <= N; ++j) {
      const double dt = static_cast<double>(j - a);
      const double slo_j = (g.at(j, 0) - eps - ya) / dt;
      const double shi_j = (g.at(j, 0) + eps - ya) / dt;
      const bool lo_new = slo_j > s_lo;
      const bool hi_new = shi_j < s_hi;
      if (lo_new) { s_lo = slo_j; j_lo = j; }
      if (hi_new) { s_hi = shi_j; j_hi = j; }
      if (s_lo > s_hi) {
        // The corridor closed at j: the wall hit first lies at the opposite
        // extreme recorded before j tightened the corridor.
        if (lo_new) {
          bend = j_hi; bend_y = g.at(j_hi, 0) + eps; on_floor = false;
        } else {
          bend = j_lo; bend_y = g.at(j_lo, 0) - eps; on_floor = true;
        }
        break;
      }
    }

    if (bend < 0) {
      // Open corridor to the right edge: flattest feasible finish.
      if (s_lo > 0.0) {
        bend = j_lo; bend_y = g.at(j_lo, 0) - eps; on_floor = true;
      } else if (s_hi < 0.0) {
        bend = j_hi; bend_y = g.at(j_hi, 0) + eps; on_floor = false;
      } else {
        fill_segment(h, a, ya, N, ya);
        break;
      }
    }

    fill_segment(h, a, ya, bend, bend_y);
    (on_floor ? sol.floor_contacts : sol.ceiling_contacts).push_back(bend);
    a = bend;
    ya = bend_y;
  }

  sol.minimizer = std::move(h);
  sol.energy = dirichlet_energy(sol.minimizer);
  return sol;
}

double min_energy_in_ball(const GridFn& g, double eps) {
  return taut_string(g, eps).energy;
}

GridFn project_direction(const GridFn& f, const std::vector<double>& u) {
  if (static_cast<int>(u.size()) != f.dim())
    throw dimension_error("project_direction: direction dimension mismatch");
  double n2 = 0.0;
  for (double v : u) n2 += v * v;
  if (std::fabs(std::sqrt(n2) - 1.0) > 1e-12)
    throw parameter_error("project_direction: direction must be unit length");
  GridFn out(1, f.n_grid());
  for (int i = 0; i <= f.n_grid(); ++i) {
    double s = 0.0;
    for (int c = 0; c < f.dim(); ++c) s += u[c] * f.at(i, c);
    out.at(i, 0) = s;
  }
  return out;
}

double dist_to_scaled_strassen(const GridFn& g, double alpha, double tol) {
  if (g.dim() != 1) throw dimension_error("dist_to_scaled_strassen: scalar input required");
  if (alpha < 0) throw parameter_error("dist_to_scaled_strassen: alpha must be >= 0");
  if (tol <= 0) throw parameter_error("dist_to_scaled_strassen: tol must be > 0");
  const double a2 = alpha * alpha;
  if (dirichlet_energy(g) <= a2) return 0.0;
  double lo = 0.0, hi = g.sup_norm();
  // I(g_eps) is nonincreasing in eps and reaches 0 at eps = ||g||.
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    double mid = 0.5 * (lo + hi);
    (min_energy_in_ball(g, mid) <= a2 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

EnergyDecomposition representation_decompose(const GridFn& f) {
  EnergyDecomposition out;
  out.scales.reserve(f.dim());
  out.directions.reserve(f.dim());
  for (int c = 0; c < f.dim(); ++c) {
    GridFn fc = f.component(c);
    double x = std::sqrt(dirichlet_energy(fc));
    out.scales.push_back(x);
    if (x > 0) {
      for (int i = 0; i <= fc.n_grid(); ++i) fc.at(i, 0) /= x;
      out.directions.push_back(std::move(fc));
    } else {
      out.directions.push_back(GridFn(1, f.n_grid()));
    }
  }
  return out;
}

double parseval_energy(const GridFn& f, const std::vector<std::vector<double>>& basis) {
  const int d = f.dim();
  if (static_cast<int>(basis.size()) != d)
    throw dimension_error("parseval_energy: basis must have dim vectors");
  for (int i = 0; i < d; ++i) {
    if (static_cast<int>(basis[i].size()) != d)
      throw dimension_error("parseval_energy: basis vector dimension mismatch");
    for (int j = 0; j <= i; ++j) {
      double dot = 0.0;
      for (int c = 0; c < d; ++c) dot += basis[i][c] * basis[j][c];
      if (std::fabs(dot - (i == j ? 1.0 : 0.0)) > 1e-10)
        throw parameter_error("parseval_energy: basis not orthonormal");
    }
  }
  double acc = 0.0;
  for (int i = 0; i < d; ++i) acc += dirichlet_energy(project_direction(f, basis[i]));
  return acc;
}

std::vector<GridFn> strassen_sample(int n_grid) {
  if (n_grid < 4) throw parameter_error("strassen_sample: n_grid must be >= 4");
  auto bend = [&](double t0, double s0, double s1) {
    GridFn f(1, n_grid);
    for (int i = 1; i <= n_grid; ++i) {
      double t = f.t(i);
      f.at(i, 0) = t <= t0 ? s0 * t : s0 * t0 + s1 * (t - t0);
    }
    return f;
  };
  std::vector<GridFn> out;
  out.push_back(bend(1.0, 1.0, 0.0));     // t
  out.push_back(bend(1.0, -1.0, 0.0));    // -t
  out.push_back(bend(0.5, 1.0, 0.0));     // rise then hold
  out.push_back(bend(0.5, 0.0, 1.0));     // hold then rise
  out.push_back(bend(0.5, 1.0, -1.0));    // tent
  out.push_back(bend(0.5, -1.0, 1.0));    // valley
  out.push_back(bend(0.25, 1.0, 0.0));    // early rise
  out.push_back(bend(0.75, 0.0, 1.0));    // late rise
  for (auto& f : out) {
    double e = dirichlet_energy(f);
    double s = 1.0 / std::sqrt(e);
    for (int i = 0; i <= n_grid; ++i) f.at(i, 0) *= s;
  }
  return out;
}

}  // namespace limset
