#include "csgf/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <numeric>
#include <random>
#include <string>
#include <utility>

#include <fftw3.h>

#include "csgf/errors.hpp"

namespace csgf {

namespace {

// FFTW planning is not thread safe; execution with the new-array interface
// is. Plans are created once per (n, sign) and reused for the process
// lifetime.
fftw_plan plan_for(std::size_t n, int sign) {
  static std::mutex mutex;
  static std::map<std::pair<std::size_t, int>, fftw_plan> plans;
  std::lock_guard lock(mutex);
  auto key = std::make_pair(n, sign);
  if (auto it = plans.find(key); it != plans.end()) return it->second;
  auto* scratch = fftw_alloc_complex(n * n);
  const int dim = static_cast<int>(n);
  fftw_plan plan = fftw_plan_dft_2d(dim, dim, scratch, scratch, sign,
                                    FFTW_ESTIMATE | FFTW_UNALIGNED);
  fftw_free(scratch);
  plans.emplace(key, plan);
  return plan;
}

// Unnormalized in-place 2D DFT of a square grid. The transform is separable
// with the same kernel on both axes, so column-major storage gives the
// transpose of a row-major transform of the transpose, i.e. the same grid.
void transform_in_place(ComplexGrid& grid, int sign) {
  const auto n = static_cast<std::size_t>(grid.rows());
  auto* data = reinterpret_cast<fftw_complex*>(grid.data());
  fftw_execute_dft(plan_for(n, sign), data, data);
}

void require_square(const ComplexGrid& grid) {
  if (grid.rows() != grid.cols() || grid.rows() == 0)
    throw InvalidArgument("series transform needs a non-empty square grid, got " +
                          std::to_string(grid.rows()) + "x" + std::to_string(grid.cols()));
}

Complex root_of_unity(std::size_t power, std::size_t n) {
  // reduce first so the angle stays in [0, 2 pi)
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(power % n) /
                       static_cast<double>(n);
  return {std::cos(angle), std::sin(angle)};
}

}  // namespace

void validate(const IndexSet& idx) {
  if (idx.n == 0) throw InvalidArgument("index set over an empty range");
  if (idx.indices.size() > idx.n)
    throw InvalidArgument("index set larger than its range");
  for (std::size_t i = 0; i < idx.indices.size(); ++i) {
    if (idx.indices[i] >= idx.n)
      throw InvalidArgument("index " + std::to_string(idx.indices[i]) +
                            " out of range for n = " + std::to_string(idx.n));
    if (i > 0 && idx.indices[i] <= idx.indices[i - 1])
      throw InvalidArgument("index set must be strictly increasing");
  }
}

IndexSet draw_index_set(std::size_t n, std::size_t m, std::uint64_t seed) {
  if (n == 0) throw InvalidArgument("n must be positive");
  if (m == 0 || m > n)
    throw InvalidArgument("need 1 <= m <= n, got m = " + std::to_string(m) +
                          ", n = " + std::to_string(n));
  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  // partial Fisher-Yates
  for (std::size_t i = 0; i < m; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    std::swap(pool[i], pool[pick(rng)]);
  }
  pool.resize(m);
  std::sort(pool.begin(), pool.end());
  return IndexSet{n, std::move(pool), seed};
}

IndexSet full_index_set(std::size_t n) {
  if (n == 0) throw InvalidArgument("n must be positive");
  IndexSet idx{n, std::vector<std::size_t>(n), 0};
  std::iota(idx.indices.begin(), idx.indices.end(), std::size_t{0});
  return idx;
}

ComplexGrid unitary_dft_matrix(std::size_t n) {
  if (n == 0) throw InvalidArgument("DFT size must be positive");
  return series_basis(n) / std::sqrt(static_cast<double>(n));
}

ComplexGrid series_basis(std::size_t n) {
  if (n == 0) throw InvalidArgument("basis size must be positive");
  const auto dim = static_cast<Eigen::Index>(n);
  ComplexGrid psi(dim, dim);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k)
      psi(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) = root_of_unity(j * k, n);
  return psi;
}

ComplexGrid partial_rows(const ComplexGrid& basis, const IndexSet& idx) {
  ComplexGrid rows(static_cast<Eigen::Index>(idx.size()), basis.cols());
  for (std::size_t r = 0; r < idx.size(); ++r) {
    if (idx.indices[r] >= static_cast<std::size_t>(basis.rows()))
      throw InvalidArgument("row index " + std::to_string(idx.indices[r]) +
                            " outside basis with " + std::to_string(basis.rows()) + " rows");
    rows.row(static_cast<Eigen::Index>(r)) = basis.row(static_cast<Eigen::Index>(idx.indices[r]));
  }
  return rows;
}

ComplexGrid inverse_series_transform(const ComplexGrid& grid) {
  ComplexGrid out = adjoint_series_transform(grid);
  const double n = static_cast<double>(grid.rows());
  out /= n * n;
  return out;
}

ComplexGrid adjoint_series_transform(const ComplexGrid& grid) {
  require_square(grid);
  ComplexGrid out = grid;
  transform_in_place(out, FFTW_FORWARD);
  return out;
}

ComplexGrid forward_series_transform(const ComplexGrid& coefficients) {
  require_square(coefficients);
  ComplexGrid out = coefficients;
  transform_in_place(out, FFTW_BACKWARD);
  return out;
}

ComplexGrid forward_series_transform(const RealGrid& coefficients) {
  return forward_series_transform(ComplexGrid(coefficients.cast<Complex>()));
}

void require_finite(const ComplexGrid& grid, const char* what) {
  if (!grid.allFinite())
    throw NumericalInconsistency(std::string(what) + " contains non-finite entries");
}

}  // namespace csgf
