#include "isoflow/kdv.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numbers>
#include <string>

#include "isoflow/errors.hpp"
#include "isoflow/fourier.hpp"

namespace isoflow {

const char* to_string(KdvScheme scheme) {
  switch (scheme) {
    case KdvScheme::IntegratingFactorRK4:
      return "ifrk4";
    case KdvScheme::ETDRK4:
      return "etdrk4";
  }
  return "unknown";
}

void validate(const KdvParams& params, const Grid& grid) {
  if (!grid.periodic()) throw PreconditionError("KdV flow requires a periodic grid");
  if (!(params.ds > 0.0) || !std::isfinite(params.ds)) {
    throw PreconditionError("KdvParams: ds must be positive");
  }
  const double kmax = grid.max_wavenumber();
  if (params.ds * kmax * kmax * kmax > kMaxDispersiveStep) {
    throw PreconditionError("KdvParams: ds*kmax^3 = " +
                            std::to_string(params.ds * kmax * kmax * kmax) + " exceeds " +
                            std::to_string(kMaxDispersiveStep));
  }
}

std::vector<double> FlowTrajectory::s_values() const {
  std::vector<double> s;
  s.reserve(samples.size());
  for (const auto& sample : samples) s.push_back(sample.s);
  return s;
}

namespace {

using Coefficients = std::vector<Complex>;

// Fourier-space right-hand side pieces shared by the steppers.
class KdvOperator {
 public:
  KdvOperator(const Grid& grid, bool dealias)
      : n_(grid.n()),
        fft_(grid.n()),
        k_(half_spectrum_wavenumbers(grid)),
        cutoff_(dealias ? grid.n() / 3 : grid.n() / 2),
        dealias_(dealias),
        v_(n_),
        vx_(n_),
        prod_(n_),
        work_(n_ / 2 + 1) {}

  std::size_t spectrum_size() const { return n_ / 2 + 1; }
  double wavenumber(std::size_t m) const { return k_[m]; }

  // Linear symbol of -D^3: i k^3, zero at Nyquist.
  Complex linear(std::size_t m) const {
    if (m == n_ / 2) return 0.0;
    return Complex(0.0, k_[m] * k_[m] * k_[m]);
  }

  // 6 v v_q in Fourier space.
  void nonlinear(const Coefficients& vhat, Coefficients& out) {
    const std::size_t ns = spectrum_size();
    for (std::size_t m = 0; m < ns; ++m) work_[m] = keep(m) ? vhat[m] : 0.0;
    fft_.inverse(work_, v_);
    for (std::size_t m = 0; m < ns; ++m) {
      work_[m] = (keep(m) && m != n_ / 2) ? Complex(0.0, k_[m]) * vhat[m] : 0.0;
    }
    fft_.inverse(work_, vx_);
    for (std::size_t j = 0; j < n_; ++j) prod_[j] = 6.0 * v_[j] * vx_[j];
    fft_.forward(prod_, out);
    for (std::size_t m = 0; m < ns; ++m) {
      if (!keep(m) || m == n_ / 2) out[m] = 0.0;
    }
  }

  void to_physical(const Coefficients& vhat, std::vector<double>& v) { fft_.inverse(vhat, v); }
  void to_fourier(std::span<const double> v, Coefficients& vhat) { fft_.forward(v, vhat); }

 private:
  bool keep(std::size_t m) const { return !dealias_ || m <= cutoff_; }

  std::size_t n_;
  RealFft fft_;
  std::vector<double> k_;
  std::size_t cutoff_;
  bool dealias_;
  std::vector<double> v_, vx_, prod_;
  Coefficients work_;
};

class KdvStepper {
 public:
  KdvStepper(const Grid& grid, const KdvParams& params, double h)
      : op_(grid, params.dealias), scheme_(params.scheme), h_(h) {
    const std::size_t ns = op_.spectrum_size();
    e_.resize(ns);
    e2_.resize(ns);
    for (std::size_t m = 0; m < ns; ++m) {
      e_[m] = std::exp(op_.linear(m) * h);
      e2_[m] = std::exp(op_.linear(m) * (0.5 * h));
    }
    if (scheme_ == KdvScheme::ETDRK4) init_etd_coefficients();
    for (auto* s : {&na_, &nb_, &nc_, &nv_, &a_, &b_, &c_}) s->resize(ns);
  }

  void step(Coefficients& v) {
    if (scheme_ == KdvScheme::ETDRK4) {
      step_etdrk4(v);
    } else {
      step_ifrk4(v);
    }
  }

  KdvOperator& op() { return op_; }

 private:
  void step_ifrk4(Coefficients& v) {
    const std::size_t ns = v.size();
    const double h = h_;
    op_.nonlinear(v, nv_);  // a = h N(v)
    for (std::size_t m = 0; m < ns; ++m) a_[m] = e2_[m] * (v[m] + 0.5 * h * nv_[m]);
    op_.nonlinear(a_, na_);  // b = h N(E(v + a/2))
    for (std::size_t m = 0; m < ns; ++m) b_[m] = e2_[m] * v[m] + 0.5 * h * na_[m];
    op_.nonlinear(b_, nb_);  // c = h N(E v + b/2)
    for (std::size_t m = 0; m < ns; ++m) c_[m] = e_[m] * v[m] + e2_[m] * h * nb_[m];
    op_.nonlinear(c_, nc_);  // d = h N(E2 v + E c)
    for (std::size_t m = 0; m < ns; ++m) {
      v[m] = e_[m] * v[m] +
             h / 6.0 * (e_[m] * nv_[m] + 2.0 * e2_[m] * (na_[m] + nb_[m]) + nc_[m]);
    }
  }

  void step_etdrk4(Coefficients& v) {
    const std::size_t ns = v.size();
    op_.nonlinear(v, nv_);
    for (std::size_t m = 0; m < ns; ++m) a_[m] = e2_[m] * v[m] + q_[m] * nv_[m];
    op_.nonlinear(a_, na_);
    for (std::size_t m = 0; m < ns; ++m) b_[m] = e2_[m] * v[m] + q_[m] * na_[m];
    op_.nonlinear(b_, nb_);
    for (std::size_t m = 0; m < ns; ++m) c_[m] = e2_[m] * a_[m] + q_[m] * (2.0 * nb_[m] - nv_[m]);
    op_.nonlinear(c_, nc_);
    for (std::size_t m = 0; m < ns; ++m) {
      v[m] = e_[m] * v[m] + f1_[m] * nv_[m] + 2.0 * f2_[m] * (na_[m] + nb_[m]) + f3_[m] * nc_[m];
    }
  }

  // Kassam-Trefethen contour averages; the full circle is used because the
  // linear symbol is imaginary.
  void init_etd_coefficients() {
    constexpr int kContour = 64;
    const std::size_t ns = e_.size();
    q_.assign(ns, 0.0);
    f1_.assign(ns, 0.0);
    f2_.assign(ns, 0.0);
    f3_.assign(ns, 0.0);
    for (std::size_t m = 0; m < ns; ++m) {
      const Complex lh = op_.linear(m) * h_;
      Complex q = 0.0, f1 = 0.0, f2 = 0.0, f3 = 0.0;
      for (int j = 0; j < kContour; ++j) {
        const Complex r = std::polar(1.0, 2.0 * std::numbers::pi * (j + 0.5) / kContour);
        const Complex z = lh + r;
        const Complex ez = std::exp(z);
        const Complex z3 = z * z * z;
        q += (std::exp(0.5 * z) - 1.0) / z;
        f1 += (-4.0 - z + ez * (4.0 - 3.0 * z + z * z)) / z3;
        f2 += (2.0 + z + ez * (-2.0 + z)) / z3;
        f3 += (-4.0 - 3.0 * z - z * z + ez * (4.0 - z)) / z3;
      }
      const double scale = h_ / kContour;
      q_[m] = q * scale;
      f1_[m] = f1 * scale;
      f2_[m] = f2 * scale;
      f3_[m] = f3 * scale;
    }
  }

  KdvOperator op_;
  KdvScheme scheme_;
  double h_;
  Coefficients e_, e2_, q_, f1_, f2_, f3_;
  Coefficients nv_, na_, nb_, nc_, a_, b_, c_;
};

double sup_of(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) {
    if (!std::isfinite(x)) return std::numeric_limits<double>::infinity();
    m = std::max(m, std::abs(x));
  }
  return m;
}

constexpr double kBlowUpFactor = 1e6;
constexpr std::size_t kBlowUpCheckInterval = 64;

void check_blow_up(KdvStepper& stepper, const Coefficients& v, std::vector<double>& buf,
                   double initial_sup, double s) {
  stepper.op().to_physical(v, buf);
  const double sup = sup_of(buf);
  const double limit = kBlowUpFactor * std::max(initial_sup, 1e-300);
  if (!std::isfinite(sup) || (initial_sup > 0.0 && sup > limit) || (initial_sup == 0.0 && sup > 0.0)) {
    throw NumericalError("evolve: blow-up detected at s = " + std::to_string(s) +
                         " (sup norm " + std::to_string(sup) + ")");
  }
}

}  // namespace

Field kdv_rhs(const Field& v, bool dealias) {
  const Grid& grid = v.grid();
  if (!grid.periodic()) throw PreconditionError("kdv_rhs: periodic grid required");
  KdvOperator op(grid, dealias);
  Coefficients vhat(op.spectrum_size());
  Coefficients nl(op.spectrum_size());
  op.to_fourier(v.values(), vhat);
  op.nonlinear(vhat, nl);
  for (std::size_t m = 0; m < vhat.size(); ++m) nl[m] += op.linear(m) * vhat[m];
  std::vector<double> out(grid.n());
  op.to_physical(nl, out);
  return Field(grid, std::move(out));
}

double soliton_value(const SolitonParams& p, double s, double q) {
  const double c = std::cosh(0.5 * std::sqrt(p.lambda) * (q - p.lambda * s - p.q0));
  return -0.5 * p.lambda / (c * c);
}

Field soliton_potential(const Grid& grid, const SolitonParams& p, double s) {
  if (!(p.lambda > 0.0)) throw PreconditionError("soliton_potential: lambda must be positive");
  Field f = sample(grid, [&](double q) { return soliton_value(p, s, q); });
  const double left = grid.periodic() ? -0.5 * grid.length() : 0.0;
  const double right = grid.periodic() ? 0.5 * grid.length() : grid.length();
  const double edge = std::max(std::abs(soliton_value(p, s, left)), std::abs(soliton_value(p, s, right)));
  if (edge > 1e-12) {
    std::cerr << "warning: soliton_potential: |V| = " << edge
              << " at the domain edge; periodic images are not negligible\n";
  }
  return f;
}

FlowTrajectory evolve(const Field& v0, double s_target, const KdvParams& params,
                      std::size_t n_snapshots) {
  const Grid& grid = v0.grid();
  validate(params, grid);
  if (!(s_target > 0.0)) throw PreconditionError("evolve: s_target must be positive");
  if (n_snapshots == 0) throw PreconditionError("evolve: n_snapshots must be positive");
  if (s_target / params.ds < 1.0) throw PreconditionError("evolve: s_target/ds must be >= 1");

  const double interval = s_target / static_cast<double>(n_snapshots);
  const auto steps_per_snapshot =
      static_cast<std::size_t>(std::max(1.0, std::ceil(interval / params.ds - 1e-9)));
  const double h = interval / static_cast<double>(steps_per_snapshot);

  FlowTrajectory traj;
  traj.params = params;
  traj.params.ds = h;
  traj.samples.reserve(n_snapshots + 1);
  traj.samples.push_back({0.0, v0});

  KdvStepper stepper(grid, traj.params, h);
  Coefficients vhat(grid.n() / 2 + 1);
  stepper.op().to_fourier(v0.values(), vhat);
  std::vector<double> buf(grid.n());
  const double initial_sup = norm_sup(v0);

  std::size_t total = 0;
  for (std::size_t snap = 1; snap <= n_snapshots; ++snap) {
    for (std::size_t i = 0; i < steps_per_snapshot; ++i) {
      stepper.step(vhat);
      if (++total % kBlowUpCheckInterval == 0) {
        check_blow_up(stepper, vhat, buf, initial_sup, static_cast<double>(total) * h);
      }
    }
    const double s = (snap == n_snapshots) ? s_target : interval * static_cast<double>(snap);
    check_blow_up(stepper, vhat, buf, initial_sup, s);
    traj.samples.push_back({s, Field(grid, buf)});
  }
  return traj;
}

Field advance(const Field& v, double s_delta, const KdvParams& params) {
  const Grid& grid = v.grid();
  validate(params, grid);
  if (s_delta == 0.0) return v;
  const auto steps = static_cast<std::size_t>(std::ceil(std::abs(s_delta) / params.ds - 1e-9));
  const double h = s_delta / static_cast<double>(std::max<std::size_t>(steps, 1));
  KdvStepper stepper(grid, params, h);
  Coefficients vhat(grid.n() / 2 + 1);
  stepper.op().to_fourier(v.values(), vhat);
  for (std::size_t i = 0; i < std::max<std::size_t>(steps, 1); ++i) stepper.step(vhat);
  std::vector<double> out(grid.n());
  stepper.op().to_physical(vhat, out);
  check_blow_up(stepper, vhat, out, norm_sup(v), s_delta);
  return Field(grid, std::move(out));
}

KdvInvariants kdv_invariants(const Field& v) {
  if (!v.grid().periodic()) throw PreconditionError("kdv_invariants: periodic grid required");
  const Field vq = differentiate(v, 1);
  double i1 = 0.0, i2 = 0.0, i3 = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    i1 += v[i];
    i2 += v[i] * v[i];
    i3 += 0.5 * vq[i] * vq[i] + v[i] * v[i] * v[i];
  }
  const double h = v.grid().spacing();
  return {h * i1, h * i2, h * i3};
}

}  // namespace isoflow
