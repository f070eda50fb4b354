#include "isoflow/schrodinger.hpp"

#include <algorithm>
#include <cmath>

#include "isoflow/errors.hpp"

namespace isoflow {

OperatorMatrix build_hamiltonian(const Field& v) {
  const Grid& grid = v.grid();
  RealMatrix h = -derivative_matrix(grid, 2) + multiplication_matrix(v);
  return OperatorMatrix(h.cast<Complex>(), grid);
}

IsospectralityReport isospectrality_report(const FlowTrajectory& traj, std::size_t k_bound_states,
                                           double tolerance) {
  if (traj.samples.empty()) throw PreconditionError("isospectrality_report: empty trajectory");
  IsospectralityReport report;
  report.tolerance = tolerance;
  report.drift.assign(k_bound_states, 0.0);
  for (const auto& sample : traj.samples) {
    report.s_values.push_back(sample.s);
    if (k_bound_states == 0) {
      report.eigenvalues.emplace_back();
      continue;
    }
    const Spectrum spec = eigen(build_hamiltonian(sample.field), k_bound_states);
    report.eigenvalues.push_back(spec.eigenvalues);
  }
  const auto& first = report.eigenvalues.front();
  for (const auto& levels : report.eigenvalues) {
    for (std::size_t i = 0; i < k_bound_states; ++i) {
      report.drift[i] = std::max(report.drift[i], std::abs(levels[i] - first[i]));
    }
  }
  for (double d : report.drift) report.max_drift = std::max(report.max_drift, d);
  report.pass = report.max_drift < tolerance;
  return report;
}

std::size_t count_bound_states(const Field& v, double threshold) {
  const Spectrum spec = eigen(build_hamiltonian(v));
  return static_cast<std::size_t>(
      std::count_if(spec.eigenvalues.begin(), spec.eigenvalues.end(),
                    [&](double e) { return e < threshold; }));
}

}  // namespace isoflow
