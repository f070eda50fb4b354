#include "isoflow/operator.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <string>

#include "isoflow/errors.hpp"
#include "isoflow/fourier.hpp"

namespace isoflow {

double hermitian_defect(const ComplexMatrix& m) {
  const double norm = m.norm();
  if (norm == 0.0) return 0.0;
  return (m - m.adjoint()).norm() / norm;
}

OperatorMatrix::OperatorMatrix(ComplexMatrix entries, Grid grid)
    : entries_(std::move(entries)), grid_(std::move(grid)) {
  if (entries_.rows() != entries_.cols()) {
    throw PreconditionError("OperatorMatrix: matrix must be square");
  }
  if (static_cast<std::size_t>(entries_.rows()) % grid_.n() != 0) {
    throw PreconditionError("OperatorMatrix: size is not a multiple of the grid size");
  }
  hermitian_defect_ = isoflow::hermitian_defect(entries_);
}

namespace {

template <typename Solver, typename Matrix>
Spectrum collect(const Solver& solver, const Matrix& m, std::size_t count, bool keep_vectors) {
  Spectrum out;
  const auto& values = solver.eigenvalues();
  const auto& vectors = solver.eigenvectors();
  out.eigenvalues.assign(values.data(), values.data() + count);
  double residual = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const auto col = vectors.col(static_cast<Eigen::Index>(i));
    residual = std::max(residual, (m * col - values[static_cast<Eigen::Index>(i)] * col).norm());
  }
  out.residual = residual;
  if (keep_vectors) {
    out.eigenvectors = vectors.leftCols(static_cast<Eigen::Index>(count)).template cast<Complex>();
  }
  return out;
}

}  // namespace

Spectrum eigen(const OperatorMatrix& m, std::optional<std::size_t> count, bool keep_vectors) {
  if (m.hermitian_defect() > kSelfAdjointTolerance) {
    throw PreconditionError("eigen: matrix is not Hermitian (defect " +
                            std::to_string(m.hermitian_defect()) + ")");
  }
  const std::size_t n = m.size();
  const std::size_t k = std::min(count.value_or(n), n);
  const ComplexMatrix& a = m.entries();
  const bool real = a.imag().cwiseAbs().maxCoeff() == 0.0;

  Spectrum out;
  bool ok = false;
  if (real) {
    const RealMatrix ar = a.real();
    Eigen::SelfAdjointEigenSolver<RealMatrix> solver(ar);
    ok = solver.info() == Eigen::Success;
    out = collect(solver, ar, k, keep_vectors);
  } else {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(a);
    ok = solver.info() == Eigen::Success;
    out = collect(solver, a, k, keep_vectors);
  }
  double scale = 0.0;
  for (double v : out.eigenvalues) scale = std::max(scale, std::abs(v));
  scale = std::max(scale, a.cwiseAbs().maxCoeff());
  if (!ok || out.residual > 1e-8 * std::max(scale, 1.0)) {
    throw NumericalError("eigen: solver did not converge (residual " +
                         std::to_string(out.residual) + ")");
  }
  return out;
}

RealMatrix derivative_matrix(const Grid& grid, int order) {
  const auto n = static_cast<Eigen::Index>(grid.n());
  RealMatrix d = RealMatrix::Zero(n, n);
  if (grid.periodic()) {
    std::vector<double> e0(grid.n(), 0.0);
    e0[0] = 1.0;
    const Field column = differentiate(Field(grid, e0), order);
    for (Eigen::Index j = 0; j < n; ++j) {
      for (Eigen::Index l = 0; l < n; ++l) d(j, l) = column[static_cast<std::size_t>((j - l + n) % n)];
    }
    return d;
  }
  const double h = grid.spacing();
  if (order == 1) {
    // Central 5-point stencil truncated at the walls (antisymmetric).
    const double w1 = 8.0 / (12.0 * h);
    const double w2 = -1.0 / (12.0 * h);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (i + 1 < n) { d(i, i + 1) = w1; d(i + 1, i) = -w1; }
      if (i + 2 < n) { d(i, i + 2) = w2; d(i + 2, i) = -w2; }
    }
    return d;
  }
  if (order == 2) {
    // 5-point stencil; the ghost value beyond each wall is the odd
    // reflection of the first interior point, which keeps the matrix symmetric.
    const double s = 1.0 / (12.0 * h * h);
    for (Eigen::Index i = 0; i < n; ++i) {
      d(i, i) = -30.0 * s;
      if (i + 1 < n) { d(i, i + 1) = 16.0 * s; d(i + 1, i) = 16.0 * s; }
      if (i + 2 < n) { d(i, i + 2) = -s; d(i + 2, i) = -s; }
    }
    d(0, 0) += s;
    d(n - 1, n - 1) += s;
    return d;
  }
  throw PreconditionError("derivative_matrix: box grids support orders 1 and 2 only");
}

RealMatrix multiplication_matrix(const Field& v) {
  const Grid& grid = v.grid();
  const auto n = grid.n();
  if (!grid.periodic()) {
    return Eigen::Map<const Eigen::VectorXd>(v.values().data(), static_cast<Eigen::Index>(n))
        .asDiagonal();
  }
  // Products of two fields band-limited to |m| < n/2 live in |m| < n, so a
  // 2n-point grid multiplies them without aliasing.
  const std::size_t half = n / 2;
  RealFft coarse(n);
  RealFft fine(2 * n);
  std::vector<Complex> vhat(half + 1);
  coarse.forward(v.values(), vhat);
  const double mean = vhat[0].real() / static_cast<double>(n);

  std::vector<Complex> padded(n + 1, 0.0);
  std::vector<double> vfine(2 * n);
  for (std::size_t m = 0; m < half; ++m) padded[m] = vhat[m];
  fine.inverse(padded, vfine);
  for (double& x : vfine) x *= 2.0;

  RealMatrix out(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  std::vector<double> unit(n, 0.0);
  std::vector<Complex> ghat(half + 1);
  std::vector<double> gfine(2 * n);
  std::vector<Complex> phat(n + 1);
  std::vector<Complex> rhat(half + 1);
  std::vector<double> column(n);
  for (std::size_t l = 0; l < n; ++l) {
    std::fill(unit.begin(), unit.end(), 0.0);
    unit[l] = 1.0;
    coarse.forward(unit, ghat);
    const Complex nyquist = ghat[half];
    std::fill(padded.begin(), padded.end(), 0.0);
    for (std::size_t m = 0; m < half; ++m) padded[m] = ghat[m];
    fine.inverse(padded, gfine);
    for (std::size_t j = 0; j < 2 * n; ++j) gfine[j] *= 2.0 * vfine[j];
    fine.forward(gfine, phat);
    for (std::size_t m = 0; m < half; ++m) rhat[m] = 0.5 * phat[m];
    rhat[half] = mean * nyquist;
    coarse.inverse(rhat, column);
    for (std::size_t j = 0; j < n; ++j) {
      out(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(l)) = column[j];
    }
  }
  return out;
}

OperatorMatrix position_operator(const Grid& grid) {
  const auto pts = grid.points();
  Eigen::VectorXd q = Eigen::Map<const Eigen::VectorXd>(pts.data(), static_cast<Eigen::Index>(pts.size()));
  return OperatorMatrix(q.cast<Complex>().asDiagonal().toDenseMatrix(), grid);
}

OperatorMatrix momentum_operator(const Grid& grid) {
  return OperatorMatrix(Complex(0.0, -1.0) * derivative_matrix(grid, 1).cast<Complex>(), grid);
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  return a * b - b * a;
}

Grid refined_grid(const Grid& grid) {
  if (!grid.periodic()) throw PreconditionError("refined_grid: periodic grid required");
  return make_grid(2 * grid.n(), grid.length(), BoundaryKind::Periodic);
}

namespace {

// Coarse samples -> fine samples through the half spectrum, Nyquist dropped.
void prolong(RealFft& coarse, RealFft& fine, std::span<const double> in, std::span<double> out) {
  const std::size_t n = coarse.size();
  std::vector<Complex> spec(n / 2 + 1);
  coarse.forward(in, spec);
  std::vector<Complex> padded(n + 1, 0.0);
  for (std::size_t m = 0; m < n / 2; ++m) padded[m] = 2.0 * spec[m];
  fine.inverse(padded, out);
}

void restrict_to(RealFft& coarse, RealFft& fine, std::span<const double> in, std::span<double> out) {
  const std::size_t n = coarse.size();
  std::vector<Complex> spec(n + 1);
  fine.forward(in, spec);
  std::vector<Complex> kept(n / 2 + 1, 0.0);
  for (std::size_t m = 0; m < n / 2; ++m) kept[m] = 0.5 * spec[m];
  coarse.inverse(kept, out);
}

}  // namespace

RealMatrix prolongation_matrix(const Grid& grid) {
  const Grid fine_grid = refined_grid(grid);
  const std::size_t n = grid.n();
  RealFft coarse(n);
  RealFft fine(2 * n);
  RealMatrix p(static_cast<Eigen::Index>(2 * n), static_cast<Eigen::Index>(n));
  std::vector<double> unit(n, 0.0);
  std::vector<double> column(2 * n);
  for (std::size_t l = 0; l < n; ++l) {
    std::fill(unit.begin(), unit.end(), 0.0);
    unit[l] = 1.0;
    prolong(coarse, fine, unit, column);
    for (std::size_t j = 0; j < 2 * n; ++j) {
      p(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(l)) = column[j];
    }
  }
  return p;
}

RealMatrix restriction_matrix(const Grid& grid) {
  const Grid fine_grid = refined_grid(grid);
  const std::size_t n = grid.n();
  RealFft coarse(n);
  RealFft fine(2 * n);
  RealMatrix r(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(2 * n));
  std::vector<double> unit(2 * n, 0.0);
  std::vector<double> column(n);
  for (std::size_t l = 0; l < 2 * n; ++l) {
    std::fill(unit.begin(), unit.end(), 0.0);
    unit[l] = 1.0;
    restrict_to(coarse, fine, unit, column);
    for (std::size_t j = 0; j < n; ++j) {
      r(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(l)) = column[j];
    }
  }
  return r;
}

Field refine(const Field& v) {
  const Grid fine_grid = refined_grid(v.grid());
  RealFft coarse(v.size());
  RealFft fine(2 * v.size());
  std::vector<double> out(2 * v.size());
  prolong(coarse, fine, v.values(), out);
  return Field(fine_grid, std::move(out));
}

}  // namespace isoflow
