#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ringlab/wavefunction.hpp"

// Discrete Fourier machinery on the periodic grid. Mode index k maps to the
// signed angular momentum l in {-N/2, ..., N/2 - 1}; psi(phi) = sum_l c_l e^{i l phi}.

namespace ringlab::spectral {

long long mode_number(std::size_t k, std::size_t n) noexcept;

/// Thread-safe handle on a cached FFTW plan pair for one grid size.
class FourierTransform {
 public:
  explicit FourierTransform(std::size_t n);

  /// In place: samples -> c_l (scaled by 1/N).
  void forward(std::span<Complex> data) const;
  /// In place: c_l -> samples.
  void inverse(std::span<Complex> data) const;

  std::size_t size() const noexcept { return n_; }

 private:
  std::size_t n_;
  const void* plans_;
};

std::vector<Complex> coefficients(const RingWavefunction& psi);
RingWavefunction synthesize(std::vector<Complex> coeffs);

/// psi(phi + delta) by the shift theorem.
RingWavefunction shift(const RingWavefunction& psi, double delta);

/// d psi / d phi; the Nyquist mode is dropped.
RingWavefunction derivative(const RingWavefunction& psi);

/// Trigonometric interpolant of psi sampled on m >= N points.
std::vector<Complex> resample(const RingWavefunction& psi, std::size_t m);

}  // namespace ringlab::spectral
