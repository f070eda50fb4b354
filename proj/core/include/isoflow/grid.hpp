#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace isoflow {

// Units: hbar = 1, 2m = 1, so the Schrodinger operator is -d^2/dq^2 + V.

enum class BoundaryKind {
  Periodic,      // points cover [-L/2, L/2), spacing L/n
  BoxDirichlet,  // points cover (0, L), spacing L/(n+1), zero at both walls
};

const char* to_string(BoundaryKind kind);

// Uniform 1D grid. Immutable after construction.
class Grid {
 public:
  std::size_t n() const { return points_.size(); }
  double length() const { return length_; }
  double spacing() const { return spacing_; }
  BoundaryKind kind() const { return kind_; }
  bool periodic() const { return kind_ == BoundaryKind::Periodic; }
  std::span<const double> points() const { return points_; }
  double point(std::size_t i) const { return points_[i]; }

  // Largest wavenumber representable on a periodic grid, pi*n/L.
  double max_wavenumber() const;

  bool operator==(const Grid& other) const;

 private:
  friend Grid make_grid(std::size_t n, double length, BoundaryKind kind);
  Grid(double length, double spacing, BoundaryKind kind, std::vector<double> points)
      : length_(length), spacing_(spacing), kind_(kind), points_(std::move(points)) {}

  double length_;
  double spacing_;
  BoundaryKind kind_;
  std::vector<double> points_;
};

// Throws PreconditionError for n < 8, odd n on periodic grids, or length <= 0.
Grid make_grid(std::size_t n, double length, BoundaryKind kind);

// Real samples of a potential on a grid.
class Field {
 public:
  Field(Grid grid, std::vector<double> values);
  explicit Field(Grid grid);  // zero field

  const Grid& grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  std::size_t size() const { return values_.size(); }

  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  Field& operator*=(double factor);

 private:
  Grid grid_;
  std::vector<double> values_;
};

Field operator+(Field lhs, const Field& rhs);
Field operator-(Field lhs, const Field& rhs);
Field operator*(double factor, Field f);

// values[i] = f(points[i]); rejects non-finite samples.
Field sample(const Grid& grid, const std::function<double(double)>& f);

// Spectral differentiation on periodic grids; on box grids, 4th-order finite
// differences (central where the stencil fits, one-sided near the walls),
// with the Dirichlet zeros at q = 0 and q = L included as stencil nodes.
Field differentiate(const Field& field, int order);

double inner_product(const Field& f, const Field& g);
double norm_sup(const Field& f);
double norm_l2(const Field& f);

// Finite-difference weights for the derivative of given order at x0 using
// the supplied nodes (Fornberg's recursion).
std::vector<double> fd_weights(double x0, std::span<const double> nodes, int order);

}  // namespace isoflow
