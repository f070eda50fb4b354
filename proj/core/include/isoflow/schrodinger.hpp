#pragma once

#include <cstddef>
#include <vector>

#include "isoflow/kdv.hpp"
#include "isoflow/operator.hpp"

namespace isoflow {

// h = -D^2 + V on the grid basis (see derivative_matrix and
// multiplication_matrix for the discretization per boundary kind).
OperatorMatrix build_hamiltonian(const Field& v);

struct IsospectralityReport {
  std::vector<double> s_values;
  std::vector<std::vector<double>> eigenvalues;  // [snapshot][level]
  std::vector<double> drift;                     // per level, max |E(s) - E(0)|
  double max_drift = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

// Tracks the k lowest eigenvalues of h(s) across the snapshots of a flow.
IsospectralityReport isospectrality_report(const FlowTrajectory& traj, std::size_t k_bound_states,
                                           double tolerance = 1e-4);

// Number of eigenvalues below `threshold` (default: strictly negative).
std::size_t count_bound_states(const Field& v, double threshold = 0.0);

}  // namespace isoflow
