#include "ringlab/gpe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "ringlab/errors.hpp"
#include "ringlab/soliton.hpp"
#include "ringlab/spectral.hpp"

namespace ringlab::gpe {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double shifted_mode(std::size_t k, std::size_t n, FluxParameter alpha) {
  return static_cast<double>(spectral::mode_number(k, n)) - alpha.alpha;
}

// e^{i theta} stored as (h, s) = (1 - cos theta, sin theta) with h formed
// without cancellation. Rotating by z - h z + i s z keeps the modulus error
// unbiased; a rounded (cos, sin) pair near 1 is off unit modulus by ~1e-16 and
// that error repeats every step.
struct Rotation {
  double h = 0.0;
  double s = 0.0;
};

Rotation rotation(double theta) {
  const double half = std::sin(0.5 * theta);
  return {2.0 * half * half, std::sin(theta)};
}

void rotate(Complex& z, Rotation r) {
  const double re = z.real();
  const double im = z.imag();
  z = Complex(re - (r.h * re + r.s * im), im - (r.h * im - r.s * re));
}

// Real-time kinetic rotations exp(-i tau (l - alpha)^2 / 2), per FFT index.
std::vector<Rotation> kinetic_rotations(std::size_t n, FluxParameter alpha, double tau) {
  std::vector<Rotation> f(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double q = shifted_mode(k, n, alpha);
    f[k] = rotation(-0.5 * tau * q * q);
  }
  return f;
}

// Imaginary-time kinetic damping for half a step.
std::vector<Complex> half_kinetic_decay(std::size_t n, FluxParameter alpha, double dtau) {
  std::vector<Complex> f(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double q = shifted_mode(k, n, alpha);
    f[k] = std::exp(-0.25 * dtau * q * q);
  }
  return f;
}

void multiply(std::span<Complex> data, std::span<const Complex> factors) {
  for (std::size_t k = 0; k < data.size(); ++k) data[k] *= factors[k];
}

void scale(std::span<Complex> data, double s) {
  for (Complex& z : data) z *= s;
}

double sum_norm(std::span<const Complex> data) {
  double s = 0.0;
  for (const Complex& z : data) s += std::norm(z);
  return s;
}

double sum_quartic(std::span<const Complex> data) {
  double s = 0.0;
  for (const Complex& z : data) {
    const double a = std::norm(z);
    s += a * a;
  }
  return s;
}

// Kinetic part of <psi, H psi> from coefficients c_l: pi sum (l - alpha)^2 |c_l|^2.
double kinetic_from_coefficients(std::span<const Complex> c, FluxParameter alpha) {
  const std::size_t n = c.size();
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double q = shifted_mode(k, n, alpha);
    s += q * q * std::norm(c[k]);
  }
  return std::numbers::pi * s;
}

class SplitStepper {
 public:
  SplitStepper(std::size_t n, const EvolutionConfig& cfg) : cfg_(cfg), fft_(n), density_(n) {
    if (cfg.mode == TimeMode::real_time) {
      phase_ = kinetic_rotations(n, cfg.alpha, 0.5 * cfg.dt);
      full_phase_ = kinetic_rotations(n, cfg.alpha, cfg.dt);
    } else {
      half_ = half_kinetic_decay(n, cfg.alpha, cfg.dt);
    }
  }

  // `count` Strang steps with the kinetic halves of neighbouring steps merged.
  void real_steps(std::span<Complex> psi, std::size_t count) {
    if (count == 0) return;
    kinetic_phase(psi, phase_);
    for (std::size_t s = 0; s < count; ++s) {
      const double rate = cfg_.dt * cfg_.lambda;
      if (rate != 0.0) {
        for (Complex& z : psi) rotate(z, rotation(rate * std::norm(z)));
      }
      kinetic_phase(psi, s + 1 < count ? full_phase_ : phase_);
    }
  }

  // One normalized imaginary-time step. The nonlinear factor uses the density
  // at the start of the step, which makes the fixed point second-order
  // accurate in dtau. Returns mu of the new state.
  double imaginary_step(std::span<Complex> psi) {
    const double rate = cfg_.dt * cfg_.lambda;
    for (std::size_t j = 0; j < psi.size(); ++j) density_[j] = std::exp(rate * std::norm(psi[j]));
    kinetic_half(psi);
    for (std::size_t j = 0; j < psi.size(); ++j) psi[j] *= density_[j];
    fft_.forward(psi);
    multiply(psi, half_);
    const double norm2 = kTwoPi * sum_norm(psi);
    const double kinetic = kinetic_from_coefficients(psi, cfg_.alpha) / norm2;
    fft_.inverse(psi);
    scale(psi, 1.0 / std::sqrt(norm2));
    const double h = kTwoPi / static_cast<double>(psi.size());
    return kinetic - cfg_.lambda * h * sum_quartic(psi);
  }

 private:
  void kinetic_phase(std::span<Complex> psi, const std::vector<Rotation>& factors) {
    fft_.forward(psi);
    for (std::size_t k = 0; k < psi.size(); ++k) rotate(psi[k], factors[k]);
    fft_.inverse(psi);
  }

  void kinetic_half(std::span<Complex> psi) {
    fft_.forward(psi);
    multiply(psi, half_);
    fft_.inverse(psi);
  }

  EvolutionConfig cfg_;
  spectral::FourierTransform fft_;
  std::vector<Complex> half_;
  std::vector<Rotation> phase_;
  std::vector<Rotation> full_phase_;
  std::vector<double> density_;
};

void require_finite(const RingWavefunction& psi) {
  for (const Complex& z : psi.samples()) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw DomainError("wavefunction has non-finite samples");
    }
  }
}

// Backward-Euler pseudospectral iteration
//   (1/tau + s + T) psi~ = (1/tau + s + mu + lambda |psi|^2) psi,  psi <- psi~/|psi~|
// with mu the current Rayleigh quotient; fixed points satisfy H psi = mu psi on the grid.
std::size_t polish(RingWavefunction& psi, FluxParameter alpha, double lambda, double tol,
                   std::size_t max_iterations, double& residual) {
  const std::size_t n = psi.size();
  const spectral::FourierTransform fft(n);
  constexpr double kInvTau = 1.0;
  residual = eigen_residual(psi, alpha, lambda);
  std::size_t it = 0;
  double best = residual;
  std::size_t since_best = 0;
  while (residual > tol && it < max_iterations) {
    double peak = 0.0;
    for (const Complex& z : psi.samples()) peak = std::max(peak, std::norm(z));
    const double shift = kInvTau + lambda * peak;
    const double mu = measure(psi, alpha, lambda).chem_potential;
    auto data = psi.samples();
    for (Complex& z : data) z *= shift + mu + lambda * std::norm(z);
    fft.forward(data);
    for (std::size_t k = 0; k < n; ++k) {
      const double q = shifted_mode(k, n, alpha);
      data[k] /= shift + 0.5 * q * q;
    }
    fft.inverse(data);
    psi = psi.normalized();
    residual = eigen_residual(psi, alpha, lambda);
    ++it;
    if (residual < 0.5 * best) {
      best = residual;
      since_best = 0;
    } else if (++since_best > 2000) {
      break;  // stalled at the rounding floor
    }
  }
  return it;
}

}  // namespace

void validate(const EvolutionConfig& cfg, std::size_t n) {
  if (!RingWavefunction::valid_grid_size(n)) {
    throw InvalidConfig("grid size must be a power of two >= 16, got " + std::to_string(n));
  }
  if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) throw InvalidConfig("dt must be positive and finite");
  if (cfg.steps == 0) throw InvalidConfig("steps must be positive");
  if (!(cfg.lambda >= 0.0) || !std::isfinite(cfg.lambda)) {
    throw InvalidConfig("lambda must be non-negative and finite");
  }
  if (!std::isfinite(cfg.alpha.alpha)) throw InvalidConfig("alpha must be finite");
  if (cfg.mode == TimeMode::real_time) {
    const double top = 0.5 * static_cast<double>(n) + std::abs(cfg.alpha.alpha);
    if (!(cfg.dt * top * top / 2.0 < std::numbers::pi)) {
      throw InvalidConfig("dt = " + std::to_string(cfg.dt) + " too large for N = " + std::to_string(n) +
                          ": need dt (N/2 + |alpha|)^2 / 2 < pi");
    }
  }
}

Observables measure(const RingWavefunction& psi, FluxParameter alpha, double lambda) {
  const std::size_t n = psi.size();
  const auto c = spectral::coefficients(psi);
  const double h = psi.spacing();

  double norm2 = 0.0;
  double current = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double w = std::norm(c[k]);
    norm2 += w;
    current += shifted_mode(k, n, alpha) * w;
  }
  norm2 *= kTwoPi;
  current *= kTwoPi;

  const double kinetic = kinetic_from_coefficients(c, alpha);
  const double quartic = h * sum_quartic(psi.samples());

  Complex z(0.0);
  for (std::size_t j = 0; j < n; ++j) z += std::polar(std::norm(psi[j]), psi.angle(j));
  z *= h;

  Observables o;
  o.norm = std::sqrt(norm2);
  o.energy = kinetic - 0.5 * lambda * quartic;
  o.chem_potential = norm2 > 0.0 ? (kinetic - lambda * quartic) / norm2 : 0.0;
  o.current = current;
  o.centroid_angle = std::arg(z);
  o.centroid_magnitude = norm2 > 0.0 ? std::abs(z) / norm2 : 0.0;
  return o;
}

RingWavefunction apply_hamiltonian(const RingWavefunction& psi, FluxParameter alpha, double lambda) {
  require_finite(psi);
  const std::size_t n = psi.size();
  auto c = spectral::coefficients(psi);
  for (std::size_t k = 0; k < n; ++k) {
    const double q = shifted_mode(k, n, alpha);
    c[k] *= 0.5 * q * q;
  }
  RingWavefunction out = spectral::synthesize(std::move(c));
  for (std::size_t j = 0; j < n; ++j) out[j] -= lambda * std::norm(psi[j]) * psi[j];
  return out;
}

double eigen_residual(const RingWavefunction& psi, FluxParameter alpha, double lambda) {
  const RingWavefunction hpsi = apply_hamiltonian(psi, alpha, lambda);
  Complex overlap(0.0);
  double norm2 = 0.0;
  for (std::size_t j = 0; j < psi.size(); ++j) {
    overlap += std::conj(psi[j]) * hpsi[j];
    norm2 += std::norm(psi[j]);
  }
  const double mu = overlap.real() / norm2;
  double sum = 0.0;
  for (std::size_t j = 0; j < psi.size(); ++j) sum += std::norm(hpsi[j] - mu * psi[j]);
  return std::sqrt(psi.spacing() * sum);
}

RingWavefunction step_real(const RingWavefunction& psi, const EvolutionConfig& cfg) {
  EvolutionConfig one = cfg;
  one.steps = 1;
  return evolve_real(psi, one);
}

RingWavefunction evolve_real(const RingWavefunction& psi, const EvolutionConfig& cfg) {
  if (cfg.mode != TimeMode::real_time) throw InvalidConfig("evolve_real needs real_time mode");
  validate(cfg, psi.size());
  require_finite(psi);
  RingWavefunction out = psi;
  SplitStepper stepper(psi.size(), cfg);
  stepper.real_steps(out.samples(), cfg.steps);
  return out;
}

std::vector<Snapshot> evolve_with_snapshots(const RingWavefunction& psi, const EvolutionConfig& cfg,
                                            std::size_t every) {
  if (cfg.mode != TimeMode::real_time) throw InvalidConfig("evolve_with_snapshots needs real_time mode");
  if (every == 0) throw InvalidConfig("snapshot interval must be positive");
  validate(cfg, psi.size());
  require_finite(psi);
  std::vector<Snapshot> out;
  out.push_back({0.0, psi});
  RingWavefunction cur = psi;
  SplitStepper stepper(psi.size(), cfg);
  for (std::size_t done = 0; done < cfg.steps;) {
    const std::size_t chunk = std::min(every, cfg.steps - done);
    stepper.real_steps(cur.samples(), chunk);
    done += chunk;
    out.push_back({static_cast<double>(done) * cfg.dt, cur});
  }
  return out;
}

RelaxResult relax_ground_state(const RingWavefunction& psi0, const EvolutionConfig& cfg,
                               const RelaxOptions& options) {
  if (cfg.mode != TimeMode::imaginary_time) {
    throw InvalidConfig("relax_ground_state needs imaginary_time mode");
  }
  validate(cfg, psi0.size());
  require_finite(psi0);
  if (!(options.tol > 0.0)) throw InvalidConfig("relaxation tolerance must be positive");

  RingWavefunction psi = psi0.normalized();
  SplitStepper stepper(psi.size(), cfg);
  double mu = measure(psi, cfg.alpha, cfg.lambda).chem_potential;
  double change = std::numeric_limits<double>::infinity();
  std::size_t steps = 0;
  while (steps < options.max_steps) {
    const double next = stepper.imaginary_step(psi.samples());
    ++steps;
    change = std::abs(next - mu);
    mu = next;
    if (change < options.tol) break;
  }
  if (!(change < options.tol)) {
    throw NoConvergence("imaginary-time relaxation hit the step cap of " + std::to_string(options.max_steps) +
                            " with |delta mu| = " + std::to_string(change),
                        steps, change);
  }

  RelaxResult result{psi, {}, steps, 0, change, 0.0};
  if (options.polish) {
    result.polish_iterations = polish(result.state, cfg.alpha, cfg.lambda, options.tol,
                                      options.max_polish_iterations, result.residual);
  } else {
    result.residual = eigen_residual(result.state, cfg.alpha, cfg.lambda);
  }
  result.observables = measure(result.state, cfg.alpha, cfg.lambda);
  return result;
}

RelaxResult relax_ground_state(const RingWavefunction& psi0, const EvolutionConfig& cfg, double tol) {
  RelaxOptions options;
  options.tol = tol;
  return relax_ground_state(psi0, cfg, options);
}

Seed default_seed(std::size_t n, FluxParameter alpha, double lambda) {
  const auto l0 = ring::ground_level(alpha).levels.front().l;
  RingWavefunction psi = RingWavefunction::plane_wave(n, l0);
  std::string descriptor = "plane(" + std::to_string(l0) + ")";
  if (lambda > soliton::kCriticalCoupling) {
    for (std::size_t j = 0; j < n; ++j) psi[j] *= 1.0 + 0.01 * std::cos(psi.angle(j));
    descriptor += "+0.01cos";
  }
  return {std::move(psi), std::move(descriptor)};
}

Seed lump_seed(std::size_t n, FluxParameter alpha, double lambda) {
  const auto l0 = ring::ground_level(alpha).levels.front().l;
  RingWavefunction psi = soliton::sample_profile(soliton::solve_soliton_branch(lambda), n);
  for (std::size_t j = 0; j < n; ++j) {
    psi[j] *= std::exp(Complex(0.0, static_cast<double>(l0) * psi.angle(j)));
  }
  return {std::move(psi), "lump(" + std::to_string(l0) + ")"};
}

RingWavefunction boost(const RingWavefunction& psi_tilde, std::int64_t l, FluxParameter alpha, double t,
                       double e0) {
  const double velocity = static_cast<double>(l) + alpha.alpha;
  RingWavefunction out = spectral::shift(psi_tilde, velocity * t);
  const double omega = e0 + 0.5 * velocity * velocity;
  for (std::size_t j = 0; j < out.size(); ++j) {
    out[j] *= std::exp(Complex(0.0, -static_cast<double>(l) * out.angle(j) - omega * t));
  }
  return out;
}

std::int64_t boost_ground_level(FluxParameter alpha) {
  // |l + alpha| is minimized by the negated ground level of the free ring at -alpha.
  const auto g = ring::ground_level(FluxParameter{-alpha.alpha});
  return g.levels.front().l;
}

double drift_rate(std::span<const Snapshot> snapshots) {
  if (snapshots.size() < 3) throw InvalidConfig("drift_rate needs at least 3 snapshots");
  std::vector<double> t;
  std::vector<double> angle;
  for (const Snapshot& s : snapshots) {
    const Observables o = measure(s.psi, FluxParameter{}, 0.0);
    if (!(o.centroid_magnitude > kMinLumpMagnitude)) {
      throw NoLump("centroid magnitude " + std::to_string(o.centroid_magnitude) + " at t = " +
                   std::to_string(s.t) + " is below the lump threshold");
    }
    double a = o.centroid_angle;
    if (!angle.empty()) {
      const double prev = angle.back();
      a = prev + std::remainder(a - prev, 2.0 * std::numbers::pi);
    }
    t.push_back(s.t);
    angle.push_back(a);
  }
  const auto count = static_cast<double>(t.size());
  double tm = 0.0;
  double am = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    tm += t[i];
    am += angle[i];
  }
  tm /= count;
  am /= count;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    sxy += (t[i] - tm) * (angle[i] - am);
    sxx += (t[i] - tm) * (t[i] - tm);
  }
  if (!(sxx > 0.0)) throw InvalidConfig("drift_rate needs snapshots at distinct times");
  return sxy / sxx;
}

}  // namespace ringlab::gpe
