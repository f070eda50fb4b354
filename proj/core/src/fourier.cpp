#include "isoflow/fourier.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

#include "isoflow/errors.hpp"

namespace isoflow {

namespace {
// FFTW's planner is not thread-safe.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

struct RealFft::Impl {
  double* real = nullptr;
  fftw_complex* spec = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan inv = nullptr;

  explicit Impl(std::size_t n) {
    std::lock_guard lock(planner_mutex());
    real = fftw_alloc_real(n);
    spec = fftw_alloc_complex(n / 2 + 1);
    const int ni = static_cast<int>(n);
    fwd = fftw_plan_dft_r2c_1d(ni, real, spec, FFTW_ESTIMATE);
    inv = fftw_plan_dft_c2r_1d(ni, spec, real, FFTW_ESTIMATE);
  }
  ~Impl() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(inv);
    fftw_free(real);
    fftw_free(spec);
  }
};

RealFft::RealFft(std::size_t n) : n_(n), impl_(std::make_unique<Impl>(n)) {
  if (n < 2) throw PreconditionError("RealFft: size must be at least 2");
}
RealFft::~RealFft() = default;
RealFft::RealFft(RealFft&&) noexcept = default;
RealFft& RealFft::operator=(RealFft&&) noexcept = default;

void RealFft::forward(std::span<const double> in, std::span<Complex> out) {
  std::copy(in.begin(), in.end(), impl_->real);
  fftw_execute(impl_->fwd);
  const auto* spec = reinterpret_cast<const Complex*>(impl_->spec);
  std::copy(spec, spec + spectrum_size(), out.begin());
}

void RealFft::inverse(std::span<const Complex> in, std::span<double> out) {
  // c2r destroys its input, so always go through the owned buffer.
  auto* spec = reinterpret_cast<Complex*>(impl_->spec);
  std::copy(in.begin(), in.begin() + static_cast<std::ptrdiff_t>(spectrum_size()), spec);
  fftw_execute(impl_->inv);
  const double scale = 1.0 / static_cast<double>(n_);
  for (std::size_t j = 0; j < n_; ++j) out[j] = impl_->real[j] * scale;
}

std::vector<double> half_spectrum_wavenumbers(const Grid& grid) {
  const std::size_t half = grid.n() / 2;
  std::vector<double> k(half + 1);
  const double k1 = 2.0 * std::numbers::pi / grid.length();
  for (std::size_t m = 0; m <= half; ++m) k[m] = k1 * static_cast<double>(m);
  return k;
}

BandLimitedInterpolant::BandLimitedInterpolant(const Field& field)
    : origin_(field.grid().point(0)), k1_(2.0 * std::numbers::pi / field.grid().length()) {
  if (!field.grid().periodic()) {
    throw PreconditionError("BandLimitedInterpolant: periodic grid required");
  }
  const std::size_t n = field.size();
  RealFft fft(n);
  coeffs_.resize(n / 2 + 1);
  fft.forward(field.values(), coeffs_);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t m = 0; m < coeffs_.size(); ++m) {
    const double weight = (m == 0 || m == n / 2) ? 1.0 : 2.0;
    coeffs_[m] *= weight * inv_n;
  }
}

double BandLimitedInterpolant::operator()(double q) const {
  const double x = q - origin_;
  const std::size_t last = coeffs_.size() - 1;
  double sum = coeffs_[0].real();
  const Complex z = std::polar(1.0, k1_ * x);
  Complex zm = z;
  for (std::size_t m = 1; m < last; ++m) {
    sum += (coeffs_[m] * zm).real();
    zm *= z;
  }
  // Nyquist term as a cosine.
  sum += coeffs_[last].real() * std::cos(k1_ * static_cast<double>(last) * x);
  return sum;
}

}  // namespace isoflow
