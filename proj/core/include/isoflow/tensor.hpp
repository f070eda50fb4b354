#pragma once

#include <cstddef>
#include <vector>

#include "isoflow/kdv.hpp"
#include "isoflow/lax.hpp"
#include "isoflow/operator.hpp"

namespace isoflow {

// Two-dimensional Hamiltonian p_x^2 + p_y^2 + V(q_x, 0) + V(q_y, s): the x
// axis keeps the initial potential, only the y axis is flowed.
struct TensorModel {
  Grid grid;
  Field vx;
  FlowTrajectory vy_of_s;
  std::vector<double> s_values;
};

inline constexpr std::size_t kMaxTensorAxis = 64;
inline constexpr std::size_t kMaxDenseTensorSize = 4096;

// Both axes start from v0; the y axis follows evolve(v0, ...).
TensorModel make_tensor_model(const Field& v0, double s_target, const KdvParams& params,
                              std::size_t n_snapshots);

// Kronecker sum Hx (x) I + I (x) Hy(s_j); index = ix * n + iy.
OperatorMatrix build_2d_hamiltonian(const TensorModel& model, std::size_t j);

// V((q1+q2)/sqrt2, 0) + V((q1-q2)/sqrt2, s_j), band-limited interpolation.
double rotated_potential(const TensorModel& model, std::size_t j, double q1, double q2);

// Max over a lattice x lattice probe of the centred mixed difference
// |V(q1+h,q2+h) - V(q1+h,q2-h) - V(q1-h,q2+h) + V(q1-h,q2-h)| / (4h^2),
// with q1, q2 in [-half_width, half_width]. Zero iff the rotated potential
// separates additively in (q1, q2) on the probe.
double coupling_witness(const TensorModel& model, std::size_t j, double half_width,
                        std::size_t lattice = 41, double h = 0.05);

// ||[q_y(s_j), q_y]||_F / ||q_y||_F^2 with q_y(s) = U(s)^H q_y U(s).
// Since [q_1s, q_20] = -1/2 I (x) [q_y(s), q_y], a nonzero value shows q_1s
// is not a function of (q_10, p_10) alone.
double nonfactorizability_witness(const UnitaryFlow& flow, std::size_t j);

}  // namespace isoflow
