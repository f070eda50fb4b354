#pragma once

#include <Eigen/Dense>

#include <complex>

#include <cstddef>
#include <optional>
#include <vector>

#include "isoflow/grid.hpp"

namespace isoflow {

using ComplexMatrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using Complex = std::complex<double>;

// Dense matrix of an operator on the grid basis. The Hermitian defect
// ||M - M^H||_F / ||M||_F is recorded at construction.
class OperatorMatrix {
 public:
  OperatorMatrix(ComplexMatrix entries, Grid grid);

  const ComplexMatrix& entries() const { return entries_; }
  const Grid& grid() const { return grid_; }
  std::size_t size() const { return static_cast<std::size_t>(entries_.rows()); }
  double hermitian_defect() const { return hermitian_defect_; }
  double frobenius_norm() const { return entries_.norm(); }

 private:
  ComplexMatrix entries_;
  Grid grid_;
  double hermitian_defect_;
};

double hermitian_defect(const ComplexMatrix& m);

struct Spectrum {
  std::vector<double> eigenvalues;                // ascending
  std::optional<ComplexMatrix> eigenvectors;      // columns, unit norm
  double residual = 0.0;                          // max ||M v - lambda v||
};

// Largest Hermitian defect accepted by eigen().
inline constexpr double kSelfAdjointTolerance = 1e-12;

// Lowest `count` eigenpairs (all when count is nullopt) of a Hermitian
// matrix. Real matrices take the real symmetric path. The residual is
// always computed from eigenvectors, even when they are not returned.
Spectrum eigen(const OperatorMatrix& m, std::optional<std::size_t> count = std::nullopt,
               bool keep_vectors = false);

// Differentiation matrices on the grid basis.
//  periodic: exact spectral circulants (Nyquist column zeroed for odd orders).
//  box (orders 1, 2): 5-point central stencils; order 2 is symmetric with odd
//  reflection at the walls, order 1 antisymmetric (truncated at the walls).
RealMatrix derivative_matrix(const Grid& grid, int order);

// Multiplication by a field. Periodic grids use the alias-free Fourier
// projection P V P (Toeplitz in Fourier space, Nyquist mode carried by the
// mean of V); box grids use diag(V).
RealMatrix multiplication_matrix(const Field& v);

// Position (sawtooth coordinate) and momentum -i D on the grid basis.
OperatorMatrix position_operator(const Grid& grid);
OperatorMatrix momentum_operator(const Grid& grid);

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);

// Periodic grid with twice the points on the same interval.
Grid refined_grid(const Grid& grid);

// Spectral prolongation (2n x n) onto refined_grid and its restriction
// (n x 2n) back, both acting on the modes |m| < n/2 only (the coarse
// Nyquist mode maps to zero). restriction * prolongation is the identity
// on those modes.
RealMatrix prolongation_matrix(const Grid& grid);
RealMatrix restriction_matrix(const Grid& grid);

// Band-limited field resampled on refined_grid (coarse Nyquist mode dropped).
Field refine(const Field& v);

}  // namespace isoflow
