#pragma once

#include <cstddef>

#include "csgf/fourier.hpp"
#include "csgf/models.hpp"

namespace csgf {

// Transition probabilities p_{(j,k),(l,m)}(t) on an n x n window; entry
// (l, m) of `values`.
struct ProbabilityGrid {
  std::size_t n = 0;
  double t = 0.0;
  unsigned j = 0;
  unsigned k = 0;
  RealGrid values;

  double sum() const { return values.sum(); }
  double max() const { return values.maxCoeff(); }
};

struct GridOptions {
  // Evaluate only one of each conjugate pair (u,v) / (-u,-v) and fill the
  // other by conjugation. Valid because the coefficients are real.
  bool conjugate_symmetry = true;
};

struct PgfGrid {
  ComplexGrid values;
  std::size_t pgf_evals = 0;   // generating-function evaluations performed
  std::size_t ode_solves = 0;  // of those, the ones that needed an ODE solve
};

// Generating function phi_{jk}(t, .) at every pair of n-th roots of unity:
// values[u][v] = phi_{jk}(t, e^{2 pi i u/n}, e^{2 pi i v/n}).
PgfGrid full_pgf_grid(const ModelSpec& model, double t, unsigned j, unsigned k, std::size_t n,
                      const GridOptions& options = {});

// Inverts a full PGF grid. Throws NumericalInconsistency when the
// transform leaves an imaginary residue above 1e-6.
ProbabilityGrid invert_full(const ComplexGrid& grid, double t = 0.0, unsigned j = 0,
                            unsigned k = 0);

// 1 - sum of entries, clamped at zero: mass the window does not capture.
double truncation_mass(const ProbabilityGrid& pg);

// full_pgf_grid followed by invert_full.
ProbabilityGrid baseline_probabilities(const ModelSpec& model, double t, unsigned j, unsigned k,
                                       std::size_t n, const GridOptions& options = {},
                                       PgfGrid* evaluation = nullptr);

// Root of unity e^{2 pi i u / n}.
Complex unit_root(std::size_t u, std::size_t n);

}  // namespace csgf
