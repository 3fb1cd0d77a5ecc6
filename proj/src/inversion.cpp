#include "csgf/inversion.hpp"

#include <atomic>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "csgf/errors.hpp"
#include "csgf/parallel.hpp"

namespace csgf {

Complex unit_root(std::size_t u, std::size_t n) {
  const double angle =
      2.0 * std::numbers::pi * static_cast<double>(u % n) / static_cast<double>(n);
  return {std::cos(angle), std::sin(angle)};
}

PgfGrid full_pgf_grid(const ModelSpec& model, double t, unsigned j, unsigned k, std::size_t n,
                      const GridOptions& options) {
  if (n == 0 || n <= j || n <= k)
    throw InvalidArgument("grid size n = " + std::to_string(n) +
                          " must exceed the initial counts (" + std::to_string(j) + ", " +
                          std::to_string(k) + ")");
  if (!(t >= 0.0)) throw InvalidArgument("elapsed time must be non-negative");

  // Frequency pairs to evaluate; with symmetry only the lexicographically
  // smaller member of each conjugate pair.
  std::vector<std::size_t> points;
  points.reserve(n * n);
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = 0; v < n; ++v) {
      if (options.conjugate_symmetry) {
        const std::size_t mirror = ((n - u) % n) * n + (n - v) % n;
        if (mirror < u * n + v) continue;
      }
      points.push_back(u * n + v);
    }
  }

  const auto dim = static_cast<Eigen::Index>(n);
  PgfGrid out;
  out.values.resize(dim, dim);
  std::vector<std::size_t> solves(points.size(), 0);
  parallel_for(points.size(), [&](std::size_t p) {
    const std::size_t u = points[p] / n;
    const std::size_t v = points[p] % n;
    const PgfQuery q{t, j, k, unit_root(u, n), unit_root(v, n)};
    Complex value;
    try {
      value = pgf_eval(model, q, &solves[p]);
    } catch (const IntegrationFailure& e) {
      throw IntegrationFailure(std::string(e.what()) + " at frequency (" + std::to_string(u) +
                                   ", " + std::to_string(v) + ")",
                               e.last_time);
    }
    out.values(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(v)) = value;
  });

  if (options.conjugate_symmetry) {
    for (std::size_t u = 0; u < n; ++u) {
      for (std::size_t v = 0; v < n; ++v) {
        const std::size_t mu = (n - u) % n, mv = (n - v) % n;
        if (mu * n + mv < u * n + v)
          out.values(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(v)) =
              std::conj(out.values(static_cast<Eigen::Index>(mu), static_cast<Eigen::Index>(mv)));
      }
    }
  }

  out.pgf_evals = points.size();
  for (auto s : solves) out.ode_solves += s;
  require_finite(out.values, "PGF grid");
  return out;
}

ProbabilityGrid invert_full(const ComplexGrid& grid, double t, unsigned j, unsigned k) {
  const ComplexGrid coeffs = inverse_series_transform(grid);
  const double residue = coeffs.imag().cwiseAbs().maxCoeff();
  if (!(residue <= 1e-6))
    throw NumericalInconsistency("inverted grid has imaginary residue " +
                                 std::to_string(residue) + " (> 1e-6)");
  return ProbabilityGrid{static_cast<std::size_t>(grid.rows()), t, j, k, coeffs.real()};
}

double truncation_mass(const ProbabilityGrid& pg) { return std::max(0.0, 1.0 - pg.sum()); }

ProbabilityGrid baseline_probabilities(const ModelSpec& model, double t, unsigned j, unsigned k,
                                       std::size_t n, const GridOptions& options,
                                       PgfGrid* evaluation) {
  PgfGrid grid = full_pgf_grid(model, t, j, k, n, options);
  ProbabilityGrid pg = invert_full(grid.values, t, j, k);
  if (evaluation) *evaluation = std::move(grid);
  return pg;
}

}  // namespace csgf
