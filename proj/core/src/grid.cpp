#include "isoflow/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "isoflow/errors.hpp"
#include "isoflow/fourier.hpp"

namespace isoflow {

const char* to_string(BoundaryKind kind) {
  switch (kind) {
    case BoundaryKind::Periodic:
      return "periodic";
    case BoundaryKind::BoxDirichlet:
      return "box";
  }
  return "unknown";
}

double Grid::max_wavenumber() const {
  return std::numbers::pi * static_cast<double>(n()) / length_;
}

bool Grid::operator==(const Grid& other) const {
  return kind_ == other.kind_ && n() == other.n() && length_ == other.length_;
}

Grid make_grid(std::size_t n, double length, BoundaryKind kind) {
  if (n < 8) {
    throw PreconditionError("make_grid: n must be >= 8 (got " + std::to_string(n) + ")");
  }
  if (kind == BoundaryKind::Periodic && n % 2 != 0) {
    throw PreconditionError("make_grid: periodic grids need an even n (got " +
                            std::to_string(n) + ")");
  }
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw PreconditionError("make_grid: length must be positive and finite");
  }
  std::vector<double> points(n);
  double spacing = 0.0;
  if (kind == BoundaryKind::Periodic) {
    spacing = length / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
      points[i] = -0.5 * length + static_cast<double>(i) * spacing;
    }
  } else {
    spacing = length / static_cast<double>(n + 1);
    for (std::size_t i = 0; i < n; ++i) points[i] = static_cast<double>(i + 1) * spacing;
  }
  return Grid(length, spacing, kind, std::move(points));
}

Field::Field(Grid grid, std::vector<double> values) : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_.n()) {
    throw PreconditionError("Field: expected " + std::to_string(grid_.n()) + " values, got " +
                            std::to_string(values_.size()));
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw PreconditionError("Field: non-finite value");
  }
}

Field::Field(Grid grid) : grid_(std::move(grid)), values_(grid_.n(), 0.0) {}

namespace {
void require_same_grid(const Field& a, const Field& b, const char* where) {
  if (!(a.grid() == b.grid())) {
    throw PreconditionError(std::string(where) + ": fields live on different grids");
  }
}
}  // namespace

Field& Field::operator+=(const Field& other) {
  require_same_grid(*this, other, "Field::operator+=");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

Field& Field::operator-=(const Field& other) {
  require_same_grid(*this, other, "Field::operator-=");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

Field& Field::operator*=(double factor) {
  for (double& v : values_) v *= factor;
  return *this;
}

Field operator+(Field lhs, const Field& rhs) { return lhs += rhs; }
Field operator-(Field lhs, const Field& rhs) { return lhs -= rhs; }
Field operator*(double factor, Field f) { return f *= factor; }

Field sample(const Grid& grid, const std::function<double(double)>& f) {
  std::vector<double> values(grid.n());
  for (std::size_t i = 0; i < grid.n(); ++i) {
    values[i] = f(grid.point(i));
    if (!std::isfinite(values[i])) {
      throw PreconditionError("sample: non-finite value at q = " + std::to_string(grid.point(i)));
    }
  }
  return Field(grid, std::move(values));
}

std::vector<double> fd_weights(double x0, std::span<const double> nodes, int order) {
  // Fornberg (1988), weights for derivatives 0..order; returns the last row.
  const std::size_t np = nodes.size();
  const auto m = static_cast<std::size_t>(order);
  std::vector<std::vector<double>> c(np, std::vector<double>(m + 1, 0.0));
  double c1 = 1.0;
  double c4 = nodes[0] - x0;
  c[0][0] = 1.0;
  for (std::size_t i = 1; i < np; ++i) {
    const std::size_t mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = nodes[i] - x0;
    for (std::size_t j = 0; j < i; ++j) {
      const double c3 = nodes[i] - nodes[j];
      c2 *= c3;
      if (j == i - 1) {
        for (std::size_t k = mn; k >= 1; --k) {
          c[i][k] = c1 * (static_cast<double>(k) * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        }
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (std::size_t k = mn; k >= 1; --k) {
        c[j][k] = (c4 * c[j][k] - static_cast<double>(k) * c[j][k - 1]) / c3;
      }
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(np);
  for (std::size_t i = 0; i < np; ++i) w[i] = c[i][m];
  return w;
}

namespace {

Field spectral_derivative(const Field& field, int order) {
  const Grid& grid = field.grid();
  const std::size_t n = grid.n();
  RealFft fft(n);
  std::vector<Complex> spec(fft.spectrum_size());
  fft.forward(field.values(), spec);
  const auto k = half_spectrum_wavenumbers(grid);
  const Complex ik_unit(0.0, 1.0);
  for (std::size_t m = 0; m < spec.size(); ++m) {
    spec[m] *= std::pow(ik_unit * k[m], order);
  }
  // Odd derivatives of the Nyquist cosine vanish on the grid.
  if (order % 2 != 0) spec.back() = 0.0;
  std::vector<double> out(n);
  fft.inverse(spec, out);
  return Field(grid, std::move(out));
}

Field box_derivative(const Field& field, int order) {
  const Grid& grid = field.grid();
  const std::size_t n = grid.n();
  // Extended node set: wall at 0, interior points, wall at L.
  std::vector<double> x(n + 2);
  std::vector<double> f(n + 2, 0.0);
  x[0] = 0.0;
  x[n + 1] = grid.length();
  for (std::size_t i = 0; i < n; ++i) {
    x[i + 1] = grid.point(i);
    f[i + 1] = field[i];
  }
  const std::size_t central = (order == 3) ? 7 : 5;
  const std::size_t one_sided = static_cast<std::size_t>(order) + 4;
  std::vector<double> out(n);
  for (std::size_t i = 1; i <= n; ++i) {
    const std::size_t half = central / 2;
    std::size_t lo = 0;
    std::size_t width = central;
    if (i >= half && i + half <= n + 1) {
      lo = i - half;
    } else {
      width = one_sided;
      lo = (i < half) ? 0 : n + 2 - width;
    }
    const std::span<const double> nodes(x.data() + lo, width);
    const auto w = fd_weights(x[i], nodes, order);
    double acc = 0.0;
    for (std::size_t j = 0; j < width; ++j) acc += w[j] * f[lo + j];
    out[i - 1] = acc;
  }
  return Field(grid, std::move(out));
}

}  // namespace

Field differentiate(const Field& field, int order) {
  if (order < 1 || order > 3) {
    throw PreconditionError("differentiate: order must be 1, 2 or 3");
  }
  return field.grid().periodic() ? spectral_derivative(field, order)
                                 : box_derivative(field, order);
}

double inner_product(const Field& f, const Field& g) {
  require_same_grid(f, g, "inner_product");
  double acc = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) acc += f[i] * g[i];
  return f.grid().spacing() * acc;
}

double norm_sup(const Field& f) {
  double m = 0.0;
  for (double v : f.values()) m = std::max(m, std::abs(v));
  return m;
}

double norm_l2(const Field& f) { return std::sqrt(inner_product(f, f)); }

}  // namespace isoflow
