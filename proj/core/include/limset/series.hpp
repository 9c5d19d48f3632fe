#ifndef LIMSET_SERIES_HPP
#define LIMSET_SERIES_HPP

#include <cstddef>
#include <functional>
#include <vector>

namespace limset {

// Three-valued divergence call for series sum_n q_n exp(-e_n) with
// q_n ~ 1/n. On the reference family e_n = s * log log n the series
// diverges iff s <= 1, so the classifier estimates the decay exponent
// s and keeps an explicit Undecided band around the boundary.
enum class SeriesClass { divergent, convergent, undecided };

const char* to_string(SeriesClass c);

struct SeriesConfig {
  double rho = 1.5;       // phase-1 growth factor: n_k = ceil(rho^k)
  int blocks = 200;       // phase-1 block count; phase 2 adds as many again
  double margin = 0.1;    // half-width of the Undecided band around s = 1
  double ln_n_cap = 1e300;  // grid stops once ln n reaches this
};

// Geometric evaluation grid. Phase 1 walks integer counts n_k = ceil(rho^k)
// from n = 3; once those blocks are spent the grid switches to fixed-factor
// growth in log log n, so n is carried only through ln n and the grid can
// sweep far past float-representable counts. Entry j describes the block
// [n_j, n_{j+1}); exponents are evaluated at the left endpoint.
struct SeriesGrid {
  std::vector<double> ln_n;      // block left endpoints, ascending
  std::vector<double> x;         // ln ln n at each endpoint
  std::vector<double> ln_width;  // ln(ln n_{j+1} - ln n_j) per block

  std::size_t size() const { return ln_n.size(); }
};

SeriesGrid make_series_grid(const SeriesConfig& cfg = {});

struct SeriesVerdict {
  SeriesClass cls = SeriesClass::undecided;
  double fitted_s = 0.0;   // estimated decay exponent on the reference scale
  double margin = 0.0;
  std::vector<double> ln_block_mass;  // ln b_j = ln width - e_j (-inf: no mass)
  std::size_t blocks_used = 0;        // blocks with finite exponent
};

// exponents[j] is e at grid point j. Entries must be >= 0; +inf marks a
// block with no mass (skipped); NaN or negative values raise
// parameter_error. All blocks massless -> Convergent; a single massy
// block -> Undecided (no trend to fit).
SeriesVerdict classify_exponents(const SeriesGrid& grid,
                                 const std::vector<double>& exponents,
                                 const SeriesConfig& cfg = {});

// Convenience wrapper: evaluates the exponent callback (argument is ln n)
// on the default grid and classifies.
SeriesVerdict series_classify(const std::function<double(double)>& exponent_at_ln_n,
                              const SeriesConfig& cfg = {});

}  // namespace limset

#endif
