#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace ringlab {

using Complex = std::complex<double>;

/// Samples of psi at phi_j = 2 pi j / N, N a power of two >= 16.
class RingWavefunction {
 public:
  explicit RingWavefunction(std::vector<Complex> samples);

  /// Constant state 1/sqrt(2 pi).
  static RingWavefunction uniform(std::size_t n);

  /// Plane wave e^{i l phi}/sqrt(2 pi).
  static RingWavefunction plane_wave(std::size_t n, long long l);

  template <class F>
  static RingWavefunction from_function(std::size_t n, F&& f) {
    std::vector<Complex> s(n);
    for (std::size_t j = 0; j < n; ++j) s[j] = Complex(f(grid_angle(j, n)));
    return RingWavefunction(std::move(s));
  }

  std::size_t size() const noexcept { return samples_.size(); }
  std::span<const Complex> samples() const noexcept { return samples_; }
  std::span<Complex> samples() noexcept { return samples_; }
  const Complex& operator[](std::size_t j) const { return samples_[j]; }
  Complex& operator[](std::size_t j) { return samples_[j]; }

  double angle(std::size_t j) const noexcept { return grid_angle(j, size()); }
  double spacing() const noexcept;

  /// (2 pi / N) sum |psi_j|^2.
  double norm_squared() const noexcept;
  double norm() const noexcept;

  /// Copy scaled to unit norm. Throws DomainError on a zero state.
  RingWavefunction normalized() const;

  static double grid_angle(std::size_t j, std::size_t n) noexcept;
  static bool valid_grid_size(std::size_t n) noexcept;

 private:
  std::vector<Complex> samples_;
};

/// sqrt((2 pi / N) sum |a_j - b_j|^2).
double l2_distance(const RingWavefunction& a, const RingWavefunction& b);

/// max_j |a_j - b_j|.
double sup_distance(const RingWavefunction& a, const RingWavefunction& b);

}  // namespace ringlab
