#include "isoflow/scattering.hpp"

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>
#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>

#include "isoflow/errors.hpp"
#include "isoflow/fourier.hpp"

namespace isoflow {

namespace {

using OdeState = std::array<double, 4>;  // Re psi, Im psi, Re psi', Im psi'

constexpr double kRelTol = 1e-10;
constexpr double kAbsTol = 1e-12;

std::function<double(double)> make_interpolant(const Field& v) {
  const Grid& grid = v.grid();
  if (grid.periodic()) {
    return [interp = BandLimitedInterpolant(v)](double q) { return interp(q); };
  }
  std::vector<double> values;
  values.reserve(v.size() + 2);
  values.push_back(0.0);
  values.insert(values.end(), v.values().begin(), v.values().end());
  values.push_back(0.0);
  auto spline = std::make_shared<boost::math::interpolators::cardinal_cubic_b_spline<double>>(
      values.begin(), values.end(), 0.0, grid.spacing());
  return [spline](double q) { return (*spline)(q); };
}

void check_window(const Field& v, const Window& w) {
  if (!(w.left < w.right)) throw PreconditionError("scattering: window must have left < right");
  const Grid& grid = v.grid();
  const double lo = grid.periodic() ? -0.5 * grid.length() : 0.0;
  const double hi = grid.periodic() ? 0.5 * grid.length() : grid.length();
  if (w.left < lo || w.right > hi) {
    throw PreconditionError("scattering: window extends beyond the grid");
  }
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double q = grid.point(i);
    if ((q < w.left || q > w.right) && std::abs(v[i]) >= kWindowThreshold) {
      throw PreconditionError("scattering: |V| = " + std::to_string(std::abs(v[i])) +
                              " at q = " + std::to_string(q) + " outside the window [" +
                              std::to_string(w.left) + ", " + std::to_string(w.right) + "]");
    }
  }
}

std::pair<Complex, Complex> integrate_one(const std::function<double(double)>& potential, double k,
                                          const Window& w) {
  namespace odeint = boost::numeric::odeint;
  const Complex i(0.0, 1.0);
  const Complex psi0 = std::exp(-i * k * w.left);
  const Complex dpsi0 = -i * k * psi0;
  OdeState x{psi0.real(), psi0.imag(), dpsi0.real(), dpsi0.imag()};
  const double k2 = k * k;
  auto rhs = [&](const OdeState& y, OdeState& dy, double q) {
    const double c = potential(q) - k2;
    dy[0] = y[2];
    dy[1] = y[3];
    dy[2] = c * y[0];
    dy[3] = c * y[1];
  };
  auto stepper = odeint::make_controlled(kAbsTol, kRelTol, odeint::runge_kutta_fehlberg78<OdeState>());
  const double dq0 = std::min(0.1, 0.1 / k);
  odeint::integrate_adaptive(stepper, rhs, x, w.left, w.right, dq0);

  const Complex psi(x[0], x[1]);
  const Complex dpsi(x[2], x[3]);
  const double q = w.right;
  const Complex a = (i * k * psi - dpsi) * std::exp(i * k * q) / (2.0 * i * k);
  const Complex b = (i * k * psi + dpsi) * std::exp(-i * k * q) / (2.0 * i * k);
  return {a, b};
}

double wrap_to_pi(double x) {
  return x - 2.0 * std::numbers::pi * std::round(x / (2.0 * std::numbers::pi));
}

}  // namespace

Window support_window(const Field& v, double margin) {
  const Grid& grid = v.grid();
  const double lo = grid.periodic() ? -0.5 * grid.length() : 0.0;
  const double hi = grid.periodic() ? grid.point(grid.n() - 1) : grid.length();
  std::optional<std::size_t> first, last;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) >= kWindowThreshold) {
      if (!first) first = i;
      last = i;
    }
  }
  if (!first) {
    const double mid = 0.5 * (lo + hi);
    return {std::max(lo, mid - margin), std::min(hi, mid + margin)};
  }
  // Extend to the neighbouring sub-threshold samples so the window edges
  // sit where V is already negligible.
  const double left = grid.point(*first) - grid.spacing() - margin;
  const double right = grid.point(*last) + grid.spacing() + margin;
  return {std::max(lo, left), std::min(hi, right)};
}

ScatteringData scattering_coefficients(const Field& v, std::span<const double> k_values,
                                       std::optional<Window> window) {
  const Window w = window.value_or(support_window(v));
  check_window(v, w);
  for (double k : k_values) {
    if (!(k > 0.0)) throw PreconditionError("scattering: wavenumbers must be positive");
  }
  const auto potential = make_interpolant(v);
  ScatteringData data;
  data.window = w;
  data.k_values.assign(k_values.begin(), k_values.end());
  for (double k : k_values) {
    const auto [a, b] = integrate_one(potential, k, w);
    const double defect = std::abs(std::norm(a) - std::norm(b) - 1.0);
    data.max_wronskian_defect = std::max(data.max_wronskian_defect, defect);
    if (defect > kWronskianTolerance) {
      throw NumericalError("scattering: Wronskian identity violated at k = " + std::to_string(k) +
                           " (defect " + std::to_string(defect) + ")");
    }
    data.a.push_back(a);
    data.b.push_back(b);
  }
  return data;
}

std::vector<double> log_spaced_wavenumbers(double k_min, double k_max, std::size_t count) {
  if (!(k_min > 0.0) || !(k_max >= k_min) || count == 0) {
    throw PreconditionError("log_spaced_wavenumbers: need 0 < k_min <= k_max and count > 0");
  }
  std::vector<double> k(count);
  if (count == 1) {
    k[0] = k_min;
    return k;
  }
  const double ratio = std::log(k_max / k_min) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) k[i] = k_min * std::exp(ratio * static_cast<double>(i));
  k.back() = k_max;
  return k;
}

FlowScatteringReport flow_scattering_report(const FlowTrajectory& traj,
                                            std::span<const double> k_values,
                                            std::optional<Window> window, double fit_k_min,
                                            double fit_k_max) {
  if (traj.samples.empty()) throw PreconditionError("flow_scattering_report: empty trajectory");
  FlowScatteringReport r;
  r.s_values = traj.s_values();
  r.k_values.assign(k_values.begin(), k_values.end());

  Window w{0.0, 0.0};
  if (window) {
    w = *window;
  } else {
    w = support_window(traj.samples.front().field);
    for (const auto& sample : traj.samples) {
      const Window ws = support_window(sample.field);
      w.left = std::min(w.left, ws.left);
      w.right = std::max(w.right, ws.right);
    }
  }
  r.window = w;
  for (const auto& sample : traj.samples) {
    r.per_snapshot.push_back(scattering_coefficients(sample.field, k_values, w));
    r.max_wronskian_defect = std::max(r.max_wronskian_defect, r.per_snapshot.back().max_wronskian_defect);
  }

  const std::size_t nk = k_values.size();
  const std::size_t ns = r.s_values.size();
  const auto& base = r.per_snapshot.front();
  r.a_drift.assign(nk, 0.0);
  r.b_modulus_drift.assign(nk, 0.0);
  r.phase_shift.assign(nk, std::vector<double>(ns, 0.0));
  r.phase_valid.assign(nk, true);
  r.phase_rate.assign(nk, 0.0);
  r.phase_fit_residual.assign(nk, 0.0);

  double s_mean = 0.0;
  for (double s : r.s_values) s_mean += s;
  s_mean /= static_cast<double>(ns);
  double s_var = 0.0;
  for (double s : r.s_values) s_var += (s - s_mean) * (s - s_mean);

  for (std::size_t ik = 0; ik < nk; ++ik) {
    const Complex b0 = base.b[ik];
    double previous = 0.0;
    for (std::size_t j = 0; j < ns; ++j) {
      const auto& d = r.per_snapshot[j];
      r.a_drift[ik] = std::max(r.a_drift[ik], std::abs(d.a[ik] - base.a[ik]));
      r.b_modulus_drift[ik] = std::max(r.b_modulus_drift[ik], std::abs(std::abs(d.b[ik]) - std::abs(b0)));
      if (std::abs(d.b[ik]) < kPhaseNoiseFloor) r.phase_valid[ik] = false;
      if (j == 0) continue;
      const double raw = std::arg(d.b[ik]) - std::arg(b0);
      const double unwrapped = previous + wrap_to_pi(raw - previous);
      r.phase_shift[ik][j] = unwrapped;
      previous = unwrapped;
    }
    if (!r.phase_valid[ik] || ns < 2 || s_var == 0.0) continue;
    const auto& phi = r.phase_shift[ik];
    double p_mean = 0.0;
    for (double p : phi) p_mean += p;
    p_mean /= static_cast<double>(ns);
    double cov = 0.0;
    for (std::size_t j = 0; j < ns; ++j) cov += (r.s_values[j] - s_mean) * (phi[j] - p_mean);
    const double slope = cov / s_var;
    const double intercept = p_mean - slope * s_mean;
    double sq = 0.0;
    for (std::size_t j = 0; j < ns; ++j) {
      const double e = phi[j] - (intercept + slope * r.s_values[j]);
      sq += e * e;
    }
    r.phase_rate[ik] = slope;
    const double span = std::max(std::abs(phi.back()), 1e-300);
    r.phase_fit_residual[ik] = std::sqrt(sq / static_cast<double>(ns)) / span;
  }

  double num = 0.0, den = 0.0;
  for (std::size_t ik = 0; ik < nk; ++ik) {
    const double k = r.k_values[ik];
    if (!r.phase_valid[ik] || k < fit_k_min || k > fit_k_max) continue;
    num += r.phase_rate[ik] * k * k * k;
    den += k * k * k * k * k * k;
    ++r.cubic_fit_points;
  }
  if (r.cubic_fit_points > 0) {
    r.cubic_coefficient = num / den;
    double res = 0.0, norm = 0.0;
    for (std::size_t ik = 0; ik < nk; ++ik) {
      const double k = r.k_values[ik];
      if (!r.phase_valid[ik] || k < fit_k_min || k > fit_k_max) continue;
      const double e = r.phase_rate[ik] - r.cubic_coefficient * k * k * k;
      res += e * e;
      norm += r.phase_rate[ik] * r.phase_rate[ik];
    }
    r.cubic_fit_residual = norm > 0.0 ? std::sqrt(res / norm) : 0.0;
  }
  return r;
}

}  // namespace isoflow
