#include "ringlab/spectral.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>

#include "ringlab/errors.hpp"

namespace ringlab::spectral {
namespace {

struct PlanPair {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
};

// The FFTW planner is not thread-safe; execution of an existing plan on new
// arrays is. Plans are created once per size and live for the process.
const PlanPair& plans_for(std::size_t n) {
  static std::mutex mutex;
  static std::map<std::size_t, std::unique_ptr<PlanPair>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[n];
  if (!slot) {
    auto buffer = fftw_alloc_complex(n);
    auto pair = std::make_unique<PlanPair>();
    const int size = static_cast<int>(n);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    pair->forward = fftw_plan_dft_1d(size, buffer, buffer, FFTW_FORWARD, flags);
    pair->backward = fftw_plan_dft_1d(size, buffer, buffer, FFTW_BACKWARD, flags);
    fftw_free(buffer);
    slot = std::move(pair);
  }
  return *slot;
}

fftw_complex* as_fftw(std::span<Complex> data) {
  return reinterpret_cast<fftw_complex*>(data.data());
}

}  // namespace

long long mode_number(std::size_t k, std::size_t n) noexcept {
  const auto kk = static_cast<long long>(k);
  const auto nn = static_cast<long long>(n);
  return kk < nn / 2 ? kk : kk - nn;
}

FourierTransform::FourierTransform(std::size_t n) : n_(n), plans_(&plans_for(n)) {
  if (!RingWavefunction::valid_grid_size(n)) {
    throw InvalidConfig("FFT size must be a power of two >= 16");
  }
}

void FourierTransform::forward(std::span<Complex> data) const {
  const auto& p = *static_cast<const PlanPair*>(plans_);
  fftw_execute_dft(p.forward, as_fftw(data), as_fftw(data));
  const double scale = 1.0 / static_cast<double>(n_);
  for (Complex& z : data) z *= scale;
}

void FourierTransform::inverse(std::span<Complex> data) const {
  const auto& p = *static_cast<const PlanPair*>(plans_);
  fftw_execute_dft(p.backward, as_fftw(data), as_fftw(data));
}

std::vector<Complex> coefficients(const RingWavefunction& psi) {
  std::vector<Complex> c(psi.samples().begin(), psi.samples().end());
  FourierTransform(c.size()).forward(c);
  return c;
}

RingWavefunction synthesize(std::vector<Complex> coeffs) {
  FourierTransform(coeffs.size()).inverse(coeffs);
  return RingWavefunction(std::move(coeffs));
}

RingWavefunction shift(const RingWavefunction& psi, double delta) {
  auto c = coefficients(psi);
  const std::size_t n = c.size();
  for (std::size_t k = 0; k < n; ++k) {
    c[k] *= std::exp(Complex(0.0, static_cast<double>(mode_number(k, n)) * delta));
  }
  return synthesize(std::move(c));
}

RingWavefunction derivative(const RingWavefunction& psi) {
  auto c = coefficients(psi);
  const std::size_t n = c.size();
  for (std::size_t k = 0; k < n; ++k) {
    c[k] *= k == n / 2 ? Complex(0.0) : Complex(0.0, static_cast<double>(mode_number(k, n)));
  }
  return synthesize(std::move(c));
}

std::vector<Complex> resample(const RingWavefunction& psi, std::size_t m) {
  const std::size_t n = psi.size();
  if (m < n || !RingWavefunction::valid_grid_size(m)) {
    throw InvalidConfig("resample target must be a power of two no smaller than the source grid");
  }
  const auto c = coefficients(psi);
  std::vector<Complex> padded(m, Complex(0.0));
  for (std::size_t k = 0; k < n; ++k) {
    const long long l = mode_number(k, n);
    if (k == n / 2) {
      // Split the Nyquist mode symmetrically between +N/2 and -N/2.
      padded[n / 2] += 0.5 * c[k];
      padded[m - n / 2] += 0.5 * c[k];
    } else {
      padded[l >= 0 ? static_cast<std::size_t>(l) : m - static_cast<std::size_t>(-l)] = c[k];
    }
  }
  FourierTransform(m).inverse(padded);
  return padded;
}

}  // namespace ringlab::spectral
