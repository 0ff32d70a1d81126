#include "ringlab/wavefunction.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <string>

#include "ringlab/errors.hpp"

namespace ringlab {

RingWavefunction::RingWavefunction(std::vector<Complex> samples) : samples_(std::move(samples)) {
  if (!valid_grid_size(samples_.size())) {
    throw InvalidConfig("grid size must be a power of two >= 16, got " +
                        std::to_string(samples_.size()));
  }
}

RingWavefunction RingWavefunction::uniform(std::size_t n) {
  const double amp = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  return RingWavefunction(std::vector<Complex>(n, Complex(amp, 0.0)));
}

RingWavefunction RingWavefunction::plane_wave(std::size_t n, long long l) {
  const double amp = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  return from_function(n, [&](double phi) {
    return amp * std::exp(Complex(0.0, static_cast<double>(l) * phi));
  });
}

double RingWavefunction::spacing() const noexcept {
  return 2.0 * std::numbers::pi / static_cast<double>(size());
}

double RingWavefunction::norm_squared() const noexcept {
  double sum = 0.0;
  for (const Complex& z : samples_) sum += std::norm(z);
  return spacing() * sum;
}

double RingWavefunction::norm() const noexcept { return std::sqrt(norm_squared()); }

RingWavefunction RingWavefunction::normalized() const {
  const double n = norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw DomainError("cannot normalize a zero or non-finite state");
  RingWavefunction out = *this;
  for (Complex& z : out.samples_) z /= n;
  return out;
}

double RingWavefunction::grid_angle(std::size_t j, std::size_t n) noexcept {
  return 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
}

bool RingWavefunction::valid_grid_size(std::size_t n) noexcept {
  return n >= 16 && std::has_single_bit(n);
}

namespace {
void require_same_grid(const RingWavefunction& a, const RingWavefunction& b) {
  if (a.size() != b.size()) throw InvalidConfig("wavefunctions live on different grids");
}
}  // namespace

double l2_distance(const RingWavefunction& a, const RingWavefunction& b) {
  require_same_grid(a, b);
  double sum = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) sum += std::norm(a[j] - b[j]);
  return std::sqrt(a.spacing() * sum);
}

double sup_distance(const RingWavefunction& a, const RingWavefunction& b) {
  require_same_grid(a, b);
  double worst = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) worst = std::max(worst, std::abs(a[j] - b[j]));
  return worst;
}

}  // namespace ringlab
