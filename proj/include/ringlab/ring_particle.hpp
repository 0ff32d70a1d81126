#pragma once

#include <compare>
#include <cstdint>
#include <vector>

// Single charged particle on a unit ring threaded by flux 2*pi*alpha/q.
// States |l> = e^{i l phi} are labelled by the integer eigenvalue of the
// canonical angular momentum -i d/dphi.

namespace ringlab::ring {

struct FluxParameter {
  double alpha = 0.0;
};

struct AngularMomentumLevel {
  std::int64_t l = 0;
  friend auto operator<=>(const AngularMomentumLevel&, const AngularMomentumLevel&) = default;
};

struct GroundLevelResult {
  std::vector<AngularMomentumLevel> levels;  // one, or two when degenerate
  double energy = 0.0;
  bool degenerate = false;
};

struct GaugedLevel {
  AngularMomentumLevel level;
  FluxParameter flux;
};

inline constexpr double kDefaultTieTol = 1e-12;

/// <l|H|l> = (l - alpha)^2 / 2.
double level_energy(AngularMomentumLevel l, FluxParameter alpha);

/// <l|dphi/dt|l> = l - alpha.
double level_velocity(AngularMomentumLevel l, FluxParameter alpha);

/// Integer(s) nearest to alpha. Two levels, ascending, when alpha is within
/// tie_tol of a half-odd-integer.
GroundLevelResult ground_level(FluxParameter alpha, double tie_tol = kDefaultTieTol);

/// G_k: multiply by e^{ik phi} and shift alpha -> alpha + k.
GaugedLevel gauge_shift(AngularMomentumLevel l, FluxParameter alpha, std::int64_t k);

/// T~ = G_{2 alpha} T, mapping |l> -> |2 alpha - l>. Throws NonIntegerImage
/// unless 2 alpha is within 1e-12 of an integer.
AngularMomentumLevel modified_time_reversal(AngularMomentumLevel l, FluxParameter alpha);

}  // namespace ringlab::ring
