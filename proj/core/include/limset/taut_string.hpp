#ifndef LIMSET_TAUT_STRING_HPP
#define LIMSET_TAUT_STRING_HPP

#include <vector>

#include "limset/grid_fn.hpp"

namespace limset {

// Result of minimizing the Dirichlet energy over the sup-norm tube
// [g - eps, g + eps] with the left node pinned at 0 and the right node free.
struct TubeSolution {
  GridFn minimizer;
  double epsilon = 0.0;
  double energy = 0.0;
  std::vector<int> floor_contacts;    // nodes where the string bends on g - eps
  std::vector<int> ceiling_contacts;  // nodes where the string bends on g + eps
};

// Exact piecewise-linear Dirichlet energy N * sum_i |f(t_i) - f(t_{i-1})|^2,
// summed over components.
double dirichlet_energy(const GridFn& f);

// Taut string through the tube around a scalar g. eps == 0 returns g itself.
TubeSolution taut_string(const GridFn& g, double eps);

// Energy of the tube minimizer, I(g_eps).
double min_energy_in_ball(const GridFn& g, double eps);

// Scalar projection t -> <u, f(t)>. u must be unit length within 1e-12.
GridFn project_direction(const GridFn& f, const std::vector<double>& u);

// Smallest eps with I(g_eps) <= alpha^2, i.e. the sup-distance from scalar g
// to the Strassen ball scaled by alpha. Bisection to absolute tolerance tol.
double dist_to_scaled_strassen(const GridFn& g, double alpha, double tol = 1e-6);

// f_i = x_i * g_i with x_i = I(f_i)^{1/2} and unit-energy directions g_i
// (zero components give x_i = 0 and a zero direction).
struct EnergyDecomposition {
  std::vector<double> scales;
  std::vector<GridFn> directions;
};
EnergyDecomposition representation_decompose(const GridFn& f);

// sum_i I(<u_i, f>) over an orthonormal basis; validates orthonormality
// within 1e-10 and equals dirichlet_energy(f) up to rounding.
double parseval_energy(const GridFn& f, const std::vector<std::vector<double>>& basis);

// Fixed sample of 8 unit-energy scalar functions (lines and one-bend
// piecewise-linear shapes), used as direction probes for set containment.
std::vector<GridFn> strassen_sample(int n_grid);

}  // namespace limset

#endif
