#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace csgf {

using Complex = std::complex<double>;
using ComplexGrid = Eigen::MatrixXcd;
using RealGrid = Eigen::MatrixXd;

// Sampled frequency indices: strictly increasing, distinct, all < n.
struct IndexSet {
  std::size_t n = 0;
  std::vector<std::size_t> indices;
  std::uint64_t seed = 0;

  std::size_t size() const { return indices.size(); }
};

// Validates an index set; throws InvalidArgument when out of range,
// unsorted or duplicated.
void validate(const IndexSet& idx);

// Draws m of the n frequencies uniformly without replacement. Deterministic
// for a given seed. The result is sorted.
IndexSet draw_index_set(std::size_t n, std::size_t m, std::uint64_t seed);

// The full index set {0, ..., n-1}.
IndexSet full_index_set(std::size_t n);

// F[j][k] = exp(i 2 pi j k / n) / sqrt(n).
ComplexGrid unitary_dft_matrix(std::size_t n);

// psi[j][k] = exp(i 2 pi j k / n), unnormalized. With this basis the grid of
// generating-function values on the roots of unity is exactly psi * S * psi^T.
ComplexGrid series_basis(std::size_t n);

// Stacks the rows of `basis` selected by idx, in index order.
ComplexGrid partial_rows(const ComplexGrid& basis, const IndexSet& idx);

// T[l][m] = (1/n^2) sum_{u,v} grid[u][v] exp(-2 pi i (l u + m v) / n).
ComplexGrid inverse_series_transform(const ComplexGrid& grid);

// psi * S * psi^T evaluated with a fast transform:
// out[u][v] = sum_{l,m} S[l][m] exp(2 pi i (l u + m v) / n).
ComplexGrid forward_series_transform(const ComplexGrid& coefficients);
ComplexGrid forward_series_transform(const RealGrid& coefficients);

// Unnormalized negative-kernel transform,
// out[l][m] = sum_{u,v} grid[u][v] exp(-2 pi i (l u + m v) / n).
ComplexGrid adjoint_series_transform(const ComplexGrid& grid);

// Throws NumericalInconsistency if any entry is NaN or infinite.
void require_finite(const ComplexGrid& grid, const char* what);

}  // namespace csgf
