#include "ringlab/soliton.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <string>

#include "ringlab/errors.hpp"

namespace ringlab::soliton {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kSnapTol = 1e-7;
constexpr double kTieTol = 1e-12;

void require_positive_coupling(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw DomainError("coupling lambda must be positive and finite, got " + std::to_string(lambda));
  }
}

// Trapezoidal nodes for the profile integrals. The dn^2 Fourier modes decay
// like exp(-pi^2 n / (2K)), so 64 K nodes resolve them far below rounding.
std::size_t quadrature_nodes(const StationarySolution& sol) {
  if (sol.branch == Branch::uniform) return 64;
  const double k = elliptic::complete_K(*sol.m);
  const auto wanted = static_cast<std::size_t>(std::ceil(64.0 * k));
  return std::bit_ceil(std::clamp<std::size_t>(wanted, 2048, std::size_t{1} << 20));
}

template <class F>
double ring_trapezoid(std::size_t n, F&& f) {
  const double h = kTwoPi / static_cast<double>(n);
  double sum = 0.0;
  for (std::size_t j = 0; j < n; ++j) sum += f(h * static_cast<double>(j));
  return h * sum;
}

}  // namespace

const char* to_string(Branch b) noexcept {
  return b == Branch::uniform ? "uniform" : "soliton";
}

double StationarySolution::value(double phi) const {
  if (branch == Branch::uniform) return 1.0 / std::sqrt(kTwoPi);
  const double scale = *r * std::sqrt(lambda);
  return *r * elliptic::jacobi_dn(scale * (phi + beta), *m);
}

double StationarySolution::slope(double phi) const {
  if (branch == Branch::uniform) return 0.0;
  const double scale = *r * std::sqrt(lambda);
  const auto j = elliptic::jacobi(scale * (phi + beta), *m);
  return -*r * scale * m->m() * j.sn * j.cn;
}

StationarySolution solve_soliton_branch(double lambda, double beta) {
  require_positive_coupling(lambda);
  if (lambda < kCriticalCoupling * (1.0 - kSnapTol)) {
    throw BelowCritical("lambda = " + std::to_string(lambda) +
                        " is below the critical coupling pi/2; no soliton branch");
  }
  const auto m = elliptic::invert_product(0.5 * std::numbers::pi * lambda, kSnapTol);
  const double k = elliptic::complete_K(m);
  const double r = k / (std::numbers::pi * std::sqrt(lambda));

  StationarySolution sol;
  sol.branch = Branch::soliton;
  sol.lambda = lambda;
  sol.m = m;
  sol.r = r;
  sol.chem_potential = -r * r * lambda * (1.0 - 0.5 * m.m());
  sol.beta = beta;
  return sol;
}

StationarySolution uniform_branch(double lambda) {
  require_positive_coupling(lambda);
  StationarySolution sol;
  sol.branch = Branch::uniform;
  sol.lambda = lambda;
  sol.chem_potential = -lambda / kTwoPi;
  return sol;
}

double energy_functional(const StationarySolution& sol) {
  const double half_lambda = 0.5 * sol.lambda;
  return ring_trapezoid(quadrature_nodes(sol), [&](double phi) {
    const double v = sol.value(phi);
    const double d = sol.slope(phi);
    return 0.5 * d * d - half_lambda * v * v * v * v;
  });
}

double norm_squared(const StationarySolution& sol) {
  return ring_trapezoid(quadrature_nodes(sol), [&](double phi) {
    const double v = sol.value(phi);
    return v * v;
  });
}

BranchComparison compare_branches(double lambda) {
  BranchComparison out;
  out.uniform = uniform_branch(lambda);
  out.energy_uniform = energy_functional(out.uniform);
  try {
    out.soliton = solve_soliton_branch(lambda);
  } catch (const BelowCritical&) {
    return out;
  }
  out.energy_soliton = energy_functional(*out.soliton);
  if (*out.energy_soliton < out.energy_uniform - kTieTol) out.selected = Branch::soliton;
  return out;
}

StationarySolution select_ground_branch(double lambda) {
  auto cmp = compare_branches(lambda);
  return cmp.selected == Branch::soliton ? *cmp.soliton : cmp.uniform;
}

RingWavefunction sample_profile(const StationarySolution& sol, std::size_t grid_size) {
  if (!RingWavefunction::valid_grid_size(grid_size)) {
    throw InvalidConfig("grid size must be a power of two >= 16");
  }
  return RingWavefunction::from_function(grid_size, [&](double phi) { return sol.value(phi); });
}

}  // namespace ringlab::soliton
