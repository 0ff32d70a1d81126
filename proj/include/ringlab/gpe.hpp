#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ringlab/ring_particle.hpp"
#include "ringlab/wavefunction.hpp"

// One-body mean-field equation on the flux-threaded ring,
//   i dpsi/dt = (1/2)(-i d/dphi - alpha)^2 psi - lambda |psi|^2 psi,
// discretized spectrally on a uniform periodic grid.

namespace ringlab::gpe {

using ring::FluxParameter;

enum class TimeMode { real_time, imaginary_time };

struct EvolutionConfig {
  double dt = 1e-3;
  std::size_t steps = 1;
  FluxParameter alpha{};
  double lambda = 0.0;
  TimeMode mode = TimeMode::real_time;
};

/// Throws InvalidConfig unless cfg is usable on an n-point grid. In real
/// time the kinetic phase per step must satisfy dt (N/2 + |alpha|)^2 / 2 < pi.
void validate(const EvolutionConfig& cfg, std::size_t n);

struct Observables {
  double norm = 0.0;            // sqrt((2 pi / N) sum |psi_j|^2)
  double energy = 0.0;          // int (1/2)|(-i d - alpha) psi|^2 - (lambda/2)|psi|^4
  double chem_potential = 0.0;  // <psi, H psi> / <psi, psi>
  double current = 0.0;         // int Im(psi* psi') - alpha |psi|^2
  double centroid_angle = 0.0;  // arg Z
  double centroid_magnitude = 0.0;  // |Z| / norm^2
};

Observables measure(const RingWavefunction& psi, FluxParameter alpha, double lambda);

/// (1/2)(-i d - alpha)^2 psi - lambda |psi|^2 psi, derivative taken spectrally.
RingWavefunction apply_hamiltonian(const RingWavefunction& psi, FluxParameter alpha, double lambda);

/// || H psi - mu psi ||_2 with mu the Rayleigh quotient.
double eigen_residual(const RingWavefunction& psi, FluxParameter alpha, double lambda);

/// One Strang step: half kinetic, full nonlinear phase, half kinetic.
RingWavefunction step_real(const RingWavefunction& psi, const EvolutionConfig& cfg);

/// cfg.steps Strang steps.
RingWavefunction evolve_real(const RingWavefunction& psi, const EvolutionConfig& cfg);

struct Snapshot {
  double t = 0.0;
  RingWavefunction psi;
};

/// Real-time run keeping the initial state and every `every`-th step.
std::vector<Snapshot> evolve_with_snapshots(const RingWavefunction& psi, const EvolutionConfig& cfg,
                                            std::size_t every);

struct RelaxOptions {
  double tol = 1e-10;
  std::size_t max_steps = 2'000'000;
  // Follow the split-step stage with a backward-Euler pseudospectral
  // iteration whose fixed point is the exact discrete eigenstate.
  bool polish = true;
  std::size_t max_polish_iterations = 20'000;
};

struct RelaxResult {
  RingWavefunction state;
  Observables observables;
  std::size_t steps = 0;
  std::size_t polish_iterations = 0;
  double last_change = 0.0;  // |delta mu| of the final split step
  double residual = 0.0;     // eigen_residual of the returned state
};

/// Imaginary-time relaxation: split steps with kinetic factor
/// exp(-dtau (l - alpha)^2 / 2) and nonlinear factor exp(dtau lambda |psi|^2),
/// renormalized every step, until |delta mu| < options.tol. Throws
/// NoConvergence when the step cap is reached first.
RelaxResult relax_ground_state(const RingWavefunction& psi0, const EvolutionConfig& cfg,
                               const RelaxOptions& options);
RelaxResult relax_ground_state(const RingWavefunction& psi0, const EvolutionConfig& cfg, double tol);

struct Seed {
  RingWavefunction psi;
  std::string descriptor;
};

/// e^{i l0 phi}/sqrt(2 pi) on the ground level l0 of the free ring, times
/// (1 + 0.01 cos phi) above the critical coupling to break translation symmetry.
Seed default_seed(std::size_t n, FluxParameter alpha, double lambda);

/// Analytic dn soliton at lambda (>= pi/2) times e^{i l0 phi}.
Seed lump_seed(std::size_t n, FluxParameter alpha, double lambda);

/// e^{-i l phi} e^{-i (e0 + (l + alpha)^2 / 2) t} psi_tilde(phi + (l + alpha) t),
/// the translated argument evaluated with the shift theorem.
RingWavefunction boost(const RingWavefunction& psi_tilde, std::int64_t l, FluxParameter alpha, double t,
                       double e0);

/// Boost label minimizing |l + alpha| (the lower one on ties).
std::int64_t boost_ground_level(FluxParameter alpha);

inline constexpr double kMinLumpMagnitude = 0.1;

/// Angular velocity of the lump: least-squares slope of the unwrapped
/// centroid angle. Needs >= 3 snapshots each with |Z| > 0.1.
double drift_rate(std::span<const Snapshot> snapshots);

}  // namespace ringlab::gpe
