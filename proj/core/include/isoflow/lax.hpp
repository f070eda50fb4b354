#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "isoflow/kdv.hpp"
#include "isoflow/operator.hpp"

namespace isoflow {

// A = i(-4 D^3 + 6 V D + 3 V_q), Hermitian-symmetrized as (M + M^H)/2.
// `asymmetry` is the Hermitian defect of M before symmetrization.
struct SymmetrizedOperator {
  OperatorMatrix op;
  double asymmetry;
};

SymmetrizedOperator build_a_operator(const Field& v);

struct LaxPair {
  OperatorMatrix h;
  OperatorMatrix a;
  double asymmetry;
};

LaxPair build_lax_pair(const Field& v);

struct LaxResidual {
  double value;        // numerator / denominator, or 0 when denominator < 1e-14
  double numerator;    // || i (h(s+d) - h(s-d)) / 2d - [A, h] ||_F
  double denominator;  // || [A, h] ||_F
  // Same ratio with the commutator of the n x n matrices themselves. Products
  // of truncated multiplication operators differ from the truncated product
  // near the cutoff (P V P W P != P VW P), which leaves an O(1e-2) floor.
  double unpadded_value;
  std::string norm = "frobenius";
};

// Re-evolves snapshot j by +/- delta with the trajectory's flow parameters
// (steps no larger than min(ds, delta)) and compares the central difference
// of h with the commutator [A(s_j), h(s_j)]. Both sides are formed on
// refined_grid, where products of band-limited operators are exact, and
// restricted back to the modes |m| < n/2 of the snapshot grid.
LaxResidual lax_residual(const FlowTrajectory& traj, std::size_t j, double delta);

struct UnitaryFlow {
  std::vector<double> s_values;
  std::vector<OperatorMatrix> u;
  double unitarity_defect = 0.0;  // max_s ||U^H U - I||_F
  Grid grid() const { return u.front().grid(); }
};

inline constexpr double kUnitarityAbort = 1e-6;

// Midpoint exponential rule  U(s+d) = exp(-i d A(s + d/2)) U(s), with the
// midpoint potential from cubic Hermite interpolation between snapshots
// (end slopes from kdv_rhs). Each snapshot interval may be split into
// `substeps`. exp is taken through the eigendecomposition of the Hermitian
// generator. Throws NumericalError if the unitarity defect exceeds 1e-6.
UnitaryFlow evolve_unitary(const FlowTrajectory& traj, std::size_t substeps = 1);

// ||U(s_j) h(0) U(s_j)^H - h(s_j)||_F / ||h(s_j)||_F.
double conjugation_residual(const UnitaryFlow& flow, const FlowTrajectory& traj, std::size_t j);

struct CanonicalPair {
  OperatorMatrix q;
  OperatorMatrix p;
};

// q(s) = U^H q U, p(s) = U^H p U with the sawtooth position and p = -i D.
CanonicalPair transformed_canonicals(const UnitaryFlow& flow, std::size_t j);

// exp(-i t H) for Hermitian H.
ComplexMatrix unitary_exponential(const ComplexMatrix& hermitian, double t);

}  // namespace isoflow
