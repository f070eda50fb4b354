#include "isoflow/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "isoflow/errors.hpp"
#include "isoflow/fourier.hpp"
#include "isoflow/schrodinger.hpp"

namespace isoflow {

TensorModel make_tensor_model(const Field& v0, double s_target, const KdvParams& params,
                              std::size_t n_snapshots) {
  const Grid& grid = v0.grid();
  if (grid.n() > kMaxTensorAxis) {
    throw PreconditionError("make_tensor_model: at most " + std::to_string(kMaxTensorAxis) +
                            " points per axis (got " + std::to_string(grid.n()) + ")");
  }
  FlowTrajectory traj = evolve(v0, s_target, params, n_snapshots);
  std::vector<double> s = traj.s_values();
  return {grid, v0, std::move(traj), std::move(s)};
}

OperatorMatrix build_2d_hamiltonian(const TensorModel& model, std::size_t j) {
  const std::size_t n = model.grid.n();
  if (n * n > kMaxDenseTensorSize) {
    throw PreconditionError("build_2d_hamiltonian: n^2 = " + std::to_string(n * n) +
                            " exceeds " + std::to_string(kMaxDenseTensorSize));
  }
  if (j >= model.vy_of_s.samples.size()) {
    throw PreconditionError("build_2d_hamiltonian: snapshot index out of range");
  }
  const ComplexMatrix hx = build_hamiltonian(model.vx).entries();
  const ComplexMatrix hy = build_hamiltonian(model.vy_of_s.samples[j].field).entries();
  const auto ni = static_cast<Eigen::Index>(n);
  ComplexMatrix h = ComplexMatrix::Zero(ni * ni, ni * ni);
  for (Eigen::Index a = 0; a < ni; ++a) {
    for (Eigen::Index b = 0; b < ni; ++b) {
      // Hx (x) I
      if (hx(a, b) != Complex(0.0)) {
        for (Eigen::Index c = 0; c < ni; ++c) h(a * ni + c, b * ni + c) += hx(a, b);
      }
    }
    // I (x) Hy
    h.block(a * ni, a * ni, ni, ni) += hy;
  }
  return OperatorMatrix(std::move(h), model.grid);
}

double rotated_potential(const TensorModel& model, std::size_t j, double q1, double q2) {
  if (j >= model.vy_of_s.samples.size()) {
    throw PreconditionError("rotated_potential: snapshot index out of range");
  }
  const double x = (q1 + q2) / std::numbers::sqrt2;
  const double y = (q1 - q2) / std::numbers::sqrt2;
  const double half = 0.5 * model.grid.length();
  if (std::abs(x) > half || std::abs(y) > half) {
    throw PreconditionError("rotated_potential: (" + std::to_string(q1) + ", " + std::to_string(q2) +
                            ") maps outside the grid window");
  }
  const BandLimitedInterpolant vx(model.vx);
  const BandLimitedInterpolant vy(model.vy_of_s.samples[j].field);
  return vx(x) + vy(y);
}

double coupling_witness(const TensorModel& model, std::size_t j, double half_width,
                        std::size_t lattice, double h) {
  if (lattice < 2) throw PreconditionError("coupling_witness: lattice needs at least 2 points");
  if (j >= model.vy_of_s.samples.size()) {
    throw PreconditionError("coupling_witness: snapshot index out of range");
  }
  const double reach = (2.0 * (half_width + h)) / std::numbers::sqrt2;
  if (reach > 0.5 * model.grid.length()) {
    throw PreconditionError("coupling_witness: probe lattice maps outside the grid window");
  }
  const BandLimitedInterpolant vx(model.vx);
  const BandLimitedInterpolant vy(model.vy_of_s.samples[j].field);
  auto value = [&](double q1, double q2) {
    return vx((q1 + q2) / std::numbers::sqrt2) + vy((q1 - q2) / std::numbers::sqrt2);
  };
  double best = 0.0;
  const double step = 2.0 * half_width / static_cast<double>(lattice - 1);
  for (std::size_t a = 0; a < lattice; ++a) {
    const double q1 = -half_width + step * static_cast<double>(a);
    for (std::size_t b = 0; b < lattice; ++b) {
      const double q2 = -half_width + step * static_cast<double>(b);
      const double mixed = (value(q1 + h, q2 + h) - value(q1 + h, q2 - h) - value(q1 - h, q2 + h) +
                            value(q1 - h, q2 - h)) /
                           (4.0 * h * h);
      best = std::max(best, std::abs(mixed));
    }
  }
  return best;
}

double nonfactorizability_witness(const UnitaryFlow& flow, std::size_t j) {
  if (j >= flow.u.size()) throw PreconditionError("nonfactorizability_witness: index out of range");
  const Grid grid = flow.grid();
  const ComplexMatrix q = position_operator(grid).entries();
  const ComplexMatrix& u = flow.u[j].entries();
  const ComplexMatrix qs = u.adjoint() * q * u;
  const double qn = q.norm();
  return commutator(qs, q).norm() / (qn * qn);
}

}  // namespace isoflow
