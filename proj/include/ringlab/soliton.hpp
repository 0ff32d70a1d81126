#pragma once

#include <cstddef>
#include <optional>

#include "ringlab/elliptic.hpp"
#include "ringlab/wavefunction.hpp"

// Closed-form stationary states of
//   mu psi = -(1/2) psi'' - lambda |psi|^2 psi
// on the unit ring at zero flux, normalized to int |psi|^2 = 1.

namespace ringlab::soliton {

/// Coupling where the dn branch bifurcates from the uniform one: pi/2.
inline constexpr double kCriticalCoupling = 1.5707963267948966;

enum class Branch { uniform, soliton };

const char* to_string(Branch b) noexcept;

struct StationarySolution {
  Branch branch = Branch::uniform;
  double lambda = 0.0;
  std::optional<elliptic::EllipticParameter> m;  // soliton only
  std::optional<double> r;                       // soliton only
  double chem_potential = 0.0;                   // frequency in e^{-i mu t}
  double beta = 0.0;                             // translation offset

  /// psi0(phi + beta) (real).
  double value(double phi) const;
  /// d/dphi psi0(phi + beta).
  double slope(double phi) const;
};

/// psi0 = r dn(r sqrt(lambda) phi, m) with E(m)K(m) = pi lambda / 2,
/// r = K / (pi sqrt(lambda)), mu = -r^2 lambda (1 - m/2). Throws BelowCritical
/// for lambda < pi/2 (beyond a 1e-7 relative snap band, see invert_product).
StationarySolution solve_soliton_branch(double lambda, double beta = 0.0);

/// |psi0| = 1/sqrt(2 pi), mu = -lambda / (2 pi).
StationarySolution uniform_branch(double lambda);

/// E[psi] = int (1/2)|psi'|^2 - (lambda/2)|psi|^4 dphi by trapezoidal
/// quadrature of the analytic profile.
double energy_functional(const StationarySolution& sol);

/// int |psi0|^2 dphi by the same quadrature.
double norm_squared(const StationarySolution& sol);

struct BranchComparison {
  StationarySolution uniform;
  std::optional<StationarySolution> soliton;
  double energy_uniform = 0.0;
  std::optional<double> energy_soliton;
  Branch selected = Branch::uniform;
};

/// Both branches with their energies; ties (within 1e-12) go to uniform.
BranchComparison compare_branches(double lambda);

/// The branch with the lower energy functional.
StationarySolution select_ground_branch(double lambda);

/// psi0(phi_j + beta) on an N-point grid.
RingWavefunction sample_profile(const StationarySolution& sol, std::size_t grid_size);

}  // namespace ringlab::soliton
