#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "isoflow/grid.hpp"

namespace isoflow {

using Complex = std::complex<double>;

// Real-to-complex FFT of fixed length backed by FFTW. Plans are created
// with FFTW_ESTIMATE so results are bit-reproducible for a given size.
class RealFft {
 public:
  explicit RealFft(std::size_t n);
  ~RealFft();
  RealFft(RealFft&&) noexcept;
  RealFft& operator=(RealFft&&) noexcept;
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  std::size_t size() const { return n_; }
  std::size_t spectrum_size() const { return n_ / 2 + 1; }

  // Unnormalized forward transform: out[m] = sum_j in[j] exp(-2 pi i m j / n).
  void forward(std::span<const double> in, std::span<Complex> out);
  // Normalized inverse: out[j] = (1/n) sum_m in[m] exp(2 pi i m j / n).
  void inverse(std::span<const Complex> in, std::span<double> out);

 private:
  struct Impl;
  std::size_t n_;
  std::unique_ptr<Impl> impl_;
};

// Angular wavenumbers 2 pi m / L for m = 0..n/2 (half spectrum).
std::vector<double> half_spectrum_wavenumbers(const Grid& grid);

// Trigonometric interpolant through the samples of a periodic field, with
// the Nyquist mode carried as a cosine so the interpolant stays real.
class BandLimitedInterpolant {
 public:
  explicit BandLimitedInterpolant(const Field& field);
  double operator()(double q) const;

 private:
  double origin_;
  double k1_;
  std::vector<Complex> coeffs_;  // already weighted and normalized
};

}  // namespace isoflow
