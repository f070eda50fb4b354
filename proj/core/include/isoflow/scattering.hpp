#pragma once

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "isoflow/kdv.hpp"

namespace isoflow {

// Convention: phi(q) = exp(-ikq) to the left of the window and
// phi(q) = a exp(-ikq) + b exp(ikq) to the right of it, with q measured in
// absolute grid coordinates. V = 0 gives a = 1, b = 0; transmission is 1/a
// and reflection b/a. For real V, |a|^2 - |b|^2 = 1.
inline constexpr const char* kScatteringConvention =
    "phi = exp(-ikq) left of window; phi = a exp(-ikq) + b exp(ikq) right of window";

struct Window {
  double left;
  double right;
};

struct ScatteringData {
  std::vector<double> k_values;
  std::vector<std::complex<double>> a;
  std::vector<std::complex<double>> b;
  Window window;
  double max_wronskian_defect = 0.0;  // max | |a|^2 - |b|^2 - 1 |
};

inline constexpr double kWronskianTolerance = 1e-6;
inline constexpr double kWindowThreshold = 1e-10;

// Smallest grid-aligned window containing every sample with |V| >= 1e-10,
// widened by `margin` on both sides and clipped to the grid extent.
Window support_window(const Field& v, double margin = 1.0);

// Integrates -psi'' + V psi = k^2 psi across the window with an adaptive
// Runge-Kutta-Fehlberg 7(8) stepper (relative tolerance 1e-10). V is
// evaluated by band-limited interpolation on periodic grids and by a cubic
// B-spline on box grids.
// Throws PreconditionError if |V| >= 1e-10 at a sample outside the window
// or k <= 0, and NumericalError if the Wronskian identity fails by > 1e-6.
ScatteringData scattering_coefficients(const Field& v, std::span<const double> k_values,
                                       std::optional<Window> window = std::nullopt);

// 24 log-spaced wavenumbers in [0.25, 4] by default.
std::vector<double> log_spaced_wavenumbers(double k_min = 0.25, double k_max = 4.0,
                                           std::size_t count = 24);

struct FlowScatteringReport {
  std::vector<double> s_values;
  std::vector<double> k_values;
  std::vector<ScatteringData> per_snapshot;
  std::vector<double> a_drift;        // per k: max_s |a(k,s) - a(k,0)|
  std::vector<double> b_modulus_drift;  // per k: max_s ||b(k,s)| - |b(k,0)||
  // Unwrapped arg b(k,s) - arg b(k,0), nearest-branch continuation from s=0;
  // [k][snapshot]. Only meaningful where phase_valid[k].
  std::vector<std::vector<double>> phase_shift;
  std::vector<bool> phase_valid;     // |b(k,s)| above the noise floor everywhere
  std::vector<double> phase_rate;     // least-squares slope of phase_shift vs s
  std::vector<double> phase_fit_residual;  // rms deviation from the line / |total shift|
  // rate ~ c k^3 fitted over k in [fit_k_min, fit_k_max] with valid phase.
  double cubic_coefficient = 0.0;
  double cubic_fit_residual = 0.0;   // ||rate - c k^3|| / ||rate||
  std::size_t cubic_fit_points = 0;
  double max_wronskian_defect = 0.0;
  Window window{0.0, 0.0};
};

inline constexpr double kPhaseNoiseFloor = 1e-8;

FlowScatteringReport flow_scattering_report(const FlowTrajectory& traj,
                                            std::span<const double> k_values,
                                            std::optional<Window> window = std::nullopt,
                                            double fit_k_min = 0.5, double fit_k_max = 3.0);

}  // namespace isoflow
