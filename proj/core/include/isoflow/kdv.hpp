#pragma once

#include <cstddef>
#include <vector>

#include "isoflow/grid.hpp"

namespace isoflow {

// Flow in s of the potential:  dV/ds = -V_qqq + 6 V V_q.
// The dispersive term is treated exactly in Fourier space; only the
// nonlinearity is stepped with fourth-order Runge-Kutta stages.

enum class KdvScheme { IntegratingFactorRK4, ETDRK4 };

const char* to_string(KdvScheme scheme);

struct KdvParams {
  double ds = 1e-4;
  KdvScheme scheme = KdvScheme::IntegratingFactorRK4;
  bool dealias = true;  // 2/3-rule truncation of the quadratic term
};

// Largest ds*kmax^3 accepted for a periodic grid.
inline constexpr double kMaxDispersiveStep = 10.0;

// Throws PreconditionError if ds <= 0 or ds*kmax^3 exceeds the guard.
void validate(const KdvParams& params, const Grid& grid);

struct FlowSample {
  double s;
  Field field;
};

struct FlowTrajectory {
  KdvParams params;  // ds is the step actually used
  std::vector<FlowSample> samples;

  const Grid& grid() const { return samples.front().field.grid(); }
  std::vector<double> s_values() const;
};

struct SolitonParams {
  double lambda = 1.0;  // speed; depth is lambda/2
  double q0 = 0.0;
};

// -D^3 v + 6 v * Dv with spectral derivatives. With dealias, both factors
// and the product are truncated to |m| <= n/3.
Field kdv_rhs(const Field& v, bool dealias = true);

// V(q) = -(lambda/2) sech^2( sqrt(lambda)/2 * (q - lambda*s - q0) ).
// Periodic images are not summed; a warning goes to stderr when the
// profile is not negligible (> 1e-12) at the domain edges.
Field soliton_potential(const Grid& grid, const SolitonParams& p, double s);
double soliton_value(const SolitonParams& p, double s, double q);

// n_snapshots+1 evenly spaced samples on [0, s_target]. The step is shrunk
// so that every snapshot interval holds a whole number of steps.
// Throws NumericalError if the sup norm exceeds 1e6 times its initial value.
FlowTrajectory evolve(const Field& v0, double s_target, const KdvParams& params,
                      std::size_t n_snapshots);

// Advances by a signed flow interval s_delta using steps no larger than params.ds.
Field advance(const Field& v, double s_delta, const KdvParams& params);

struct KdvInvariants {
  double i1;  // int V
  double i2;  // int V^2
  double i3;  // int (V_q^2 / 2 + V^3)
};

KdvInvariants kdv_invariants(const Field& v);

}  // namespace isoflow
