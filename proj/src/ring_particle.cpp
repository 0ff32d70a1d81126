#include "ringlab/ring_particle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ringlab/errors.hpp"

namespace ringlab::ring {

double level_energy(AngularMomentumLevel l, FluxParameter alpha) {
  const double v = level_velocity(l, alpha);
  return 0.5 * v * v;
}

double level_velocity(AngularMomentumLevel l, FluxParameter alpha) {
  return static_cast<double>(l.l) - alpha.alpha;
}

GroundLevelResult ground_level(FluxParameter alpha, double tie_tol) {
  if (!std::isfinite(alpha.alpha)) throw DomainError("ground_level: alpha must be finite");
  if (!(tie_tol >= 0.0)) throw DomainError("ground_level: tie tolerance must be non-negative");

  const double lower = std::floor(alpha.alpha);
  const AngularMomentumLevel lo{static_cast<std::int64_t>(lower)};
  const AngularMomentumLevel hi{lo.l + 1};
  const double frac = alpha.alpha - lower;

  GroundLevelResult result;
  if (std::abs(frac - 0.5) <= tie_tol) {
    result.levels = {lo, hi};
    result.degenerate = true;
    result.energy = std::min(level_energy(lo, alpha), level_energy(hi, alpha));
  } else {
    const AngularMomentumLevel best = frac < 0.5 ? lo : hi;
    result.levels = {best};
    result.energy = level_energy(best, alpha);
  }
  return result;
}

GaugedLevel gauge_shift(AngularMomentumLevel l, FluxParameter alpha, std::int64_t k) {
  return {AngularMomentumLevel{l.l + k}, FluxParameter{alpha.alpha + static_cast<double>(k)}};
}

AngularMomentumLevel modified_time_reversal(AngularMomentumLevel l, FluxParameter alpha) {
  const double twice = 2.0 * alpha.alpha;
  const double nearest = std::round(twice);
  if (!std::isfinite(twice) || std::abs(twice - nearest) > 1e-12) {
    throw NonIntegerImage("modified_time_reversal: 2*alpha = " + std::to_string(twice) +
                          " is not an integer");
  }
  return AngularMomentumLevel{static_cast<std::int64_t>(nearest) - l.l};
}

}  // namespace ringlab::ring
