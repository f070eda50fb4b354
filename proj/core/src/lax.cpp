#include "isoflow/lax.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <string>

#include "isoflow/errors.hpp"
#include "isoflow/schrodinger.hpp"

namespace isoflow {

namespace {

const Complex kI(0.0, 1.0);

double unitarity_defect(const ComplexMatrix& u) {
  return (u.adjoint() * u - ComplexMatrix::Identity(u.rows(), u.cols())).norm();
}

}  // namespace

SymmetrizedOperator build_a_operator(const Field& v) {
  const Grid& grid = v.grid();
  if (!grid.periodic()) throw PreconditionError("build_a_operator: periodic grid required");
  const RealMatrix d1 = derivative_matrix(grid, 1);
  const RealMatrix d3 = derivative_matrix(grid, 3);
  const RealMatrix mv = multiplication_matrix(v);
  const RealMatrix mvq = multiplication_matrix(differentiate(v, 1));
  const RealMatrix body = -4.0 * d3 + 6.0 * mv * d1 + 3.0 * mvq;
  const ComplexMatrix raw = kI * body.cast<Complex>();
  const double asymmetry = hermitian_defect(raw);
  ComplexMatrix sym = 0.5 * (raw + raw.adjoint());
  return {OperatorMatrix(std::move(sym), grid), asymmetry};
}

LaxPair build_lax_pair(const Field& v) {
  auto [a, asymmetry] = build_a_operator(v);
  return {build_hamiltonian(v), std::move(a), asymmetry};
}

LaxResidual lax_residual(const FlowTrajectory& traj, std::size_t j, double delta) {
  if (j >= traj.samples.size()) throw PreconditionError("lax_residual: snapshot index out of range");
  if (!(delta > 0.0)) throw PreconditionError("lax_residual: delta must be positive");
  const Field& v = traj.samples[j].field;
  KdvParams params = traj.params;
  params.ds = std::min(params.ds, delta);
  const Field plus = advance(v, delta, params);
  const Field minus = advance(v, -delta, params);

  LaxResidual out;
  {
    const LaxPair pair = build_lax_pair(v);
    const ComplexMatrix lhs =
        kI * (build_hamiltonian(plus).entries() - build_hamiltonian(minus).entries()) / (2.0 * delta);
    const ComplexMatrix rhs = commutator(pair.a.entries(), pair.h.entries());
    const double den = rhs.norm();
    out.unpadded_value = den < 1e-14 ? 0.0 : (lhs - rhs).norm() / den;
  }

  const ComplexMatrix prolong = prolongation_matrix(v.grid()).cast<Complex>();
  const ComplexMatrix restrict = restriction_matrix(v.grid()).cast<Complex>();
  const LaxPair fine = build_lax_pair(refine(v));
  const ComplexMatrix& a = fine.a.entries();
  const ComplexMatrix& h = fine.h.entries();
  const ComplexMatrix rhs = (restrict * a) * (h * prolong) - (restrict * h) * (a * prolong);
  const ComplexMatrix dh = build_hamiltonian(refine(plus)).entries() -
                           build_hamiltonian(refine(minus)).entries();
  const ComplexMatrix lhs = kI * (restrict * dh * prolong) / (2.0 * delta);

  out.numerator = (lhs - rhs).norm();
  out.denominator = rhs.norm();
  out.value = out.denominator < 1e-14 ? 0.0 : out.numerator / out.denominator;
  return out;
}

ComplexMatrix unitary_exponential(const ComplexMatrix& hermitian, double t) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("unitary_exponential: eigendecomposition failed");
  }
  const Eigen::VectorXcd phases =
      (solver.eigenvalues().cast<Complex>() * Complex(0.0, -t)).array().exp().matrix();
  const ComplexMatrix& w = solver.eigenvectors();
  return w * phases.asDiagonal() * w.adjoint();
}

UnitaryFlow evolve_unitary(const FlowTrajectory& traj, std::size_t substeps) {
  if (traj.samples.empty()) throw PreconditionError("evolve_unitary: empty trajectory");
  if (substeps == 0) throw PreconditionError("evolve_unitary: substeps must be positive");
  const Grid& grid = traj.grid();
  const auto n = static_cast<Eigen::Index>(grid.n());

  UnitaryFlow flow;
  ComplexMatrix u = ComplexMatrix::Identity(n, n);
  flow.s_values.push_back(traj.samples.front().s);
  flow.u.emplace_back(u, grid);

  const bool dealias = traj.params.dealias;
  for (std::size_t j = 0; j + 1 < traj.samples.size(); ++j) {
    const Field& v0 = traj.samples[j].field;
    const Field& v1 = traj.samples[j + 1].field;
    const double s0 = traj.samples[j].s;
    const double width = traj.samples[j + 1].s - s0;
    const Field f0 = kdv_rhs(v0, dealias);
    const Field f1 = kdv_rhs(v1, dealias);
    const double dt = width / static_cast<double>(substeps);
    for (std::size_t k = 0; k < substeps; ++k) {
      // Cubic Hermite interpolation at the substep midpoint.
      const double t = (static_cast<double>(k) + 0.5) / static_cast<double>(substeps);
      const double h00 = 2 * t * t * t - 3 * t * t + 1;
      const double h10 = t * t * t - 2 * t * t + t;
      const double h01 = -2 * t * t * t + 3 * t * t;
      const double h11 = t * t * t - t * t;
      std::vector<double> mid(grid.n());
      for (std::size_t i = 0; i < grid.n(); ++i) {
        mid[i] = h00 * v0[i] + h10 * width * f0[i] + h01 * v1[i] + h11 * width * f1[i];
      }
      const auto a = build_a_operator(Field(grid, std::move(mid)));
      u = unitary_exponential(a.op.entries(), dt) * u;
    }
    const double defect = unitarity_defect(u);
    flow.unitarity_defect = std::max(flow.unitarity_defect, defect);
    if (defect > kUnitarityAbort) {
      throw NumericalError("evolve_unitary: unitarity defect " + std::to_string(defect) +
                           " at s = " + std::to_string(s0 + width));
    }
    flow.s_values.push_back(traj.samples[j + 1].s);
    flow.u.emplace_back(u, grid);
  }
  return flow;
}

double conjugation_residual(const UnitaryFlow& flow, const FlowTrajectory& traj, std::size_t j) {
  if (j >= flow.u.size() || j >= traj.samples.size()) {
    throw PreconditionError("conjugation_residual: snapshot index out of range");
  }
  if (std::abs(flow.s_values[j] - traj.samples[j].s) > 1e-12) {
    throw PreconditionError("conjugation_residual: flow and trajectory s grids differ");
  }
  const ComplexMatrix& u = flow.u[j].entries();
  const ComplexMatrix h0 = build_hamiltonian(traj.samples.front().field).entries();
  const ComplexMatrix hs = build_hamiltonian(traj.samples[j].field).entries();
  return (u * h0 * u.adjoint() - hs).norm() / hs.norm();
}

CanonicalPair transformed_canonicals(const UnitaryFlow& flow, std::size_t j) {
  if (j >= flow.u.size()) throw PreconditionError("transformed_canonicals: index out of range");
  const Grid grid = flow.grid();
  const ComplexMatrix& u = flow.u[j].entries();
  const ComplexMatrix q = position_operator(grid).entries();
  const ComplexMatrix p = momentum_operator(grid).entries();
  return {OperatorMatrix(u.adjoint() * q * u, grid), OperatorMatrix(u.adjoint() * p * u, grid)};
}

}  // namespace isoflow
