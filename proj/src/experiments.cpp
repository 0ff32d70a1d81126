#include "ringlab/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <string>
#include <thread>

#include "ringlab/errors.hpp"
#include "ringlab/gpe.hpp"
#include "ringlab/io.hpp"
#include "ringlab/spectral.hpp"

namespace ringlab::experiments {
namespace {

using gpe::FluxParameter;

template <class Job>
void run_jobs(std::size_t count, unsigned threads, Job&& job) {
  const unsigned workers = worker_count(threads, count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) job(i);
    });
  }
}

gpe::RelaxOptions relax_options(const SweepConfig& cfg) {
  gpe::RelaxOptions o;
  o.tol = cfg.tol;
  o.max_steps = cfg.max_steps;
  return o;
}

gpe::EvolutionConfig imaginary(const SweepConfig& cfg, double alpha, double lambda) {
  gpe::EvolutionConfig e;
  e.dt = cfg.dt;
  e.alpha = FluxParameter{alpha};
  e.lambda = lambda;
  e.mode = gpe::TimeMode::imaginary_time;
  return e;
}

double realtime_step(const SweepConfig& cfg, std::size_t n, double alpha) {
  if (cfg.realtime_dt > 0.0) return cfg.realtime_dt;
  const double top = 0.5 * static_cast<double>(n) + std::abs(alpha);
  return std::min(1e-3, std::numbers::pi / (top * top));
}

bool is_integer(double x) { return std::abs(x - std::round(x)) <= 1e-12; }

ScanRecord lambda_record(double lambda, const SweepConfig& cfg) {
  ScanRecord rec;
  rec.lambda = lambda;
  rec.alpha = cfg.alpha;
  rec.grid_size = cfg.grid_size;
  rec.dt = cfg.dt;

  const auto cmp = soliton::compare_branches(lambda);
  rec.energy_uniform = cmp.energy_uniform;
  if (cmp.soliton) {
    rec.m = cmp.soliton->m->m();
    rec.r = *cmp.soliton->r;
    rec.energy_soliton = *cmp.energy_soliton;
  } else {
    rec.status = Status::below_critical;
  }
  rec.branch = cmp.selected;
  rec.mu_analytic = cmp.selected == soliton::Branch::soliton ? cmp.soliton->chem_potential
                                                             : cmp.uniform.chem_potential;

  const auto seed = gpe::default_seed(cfg.grid_size, FluxParameter{cfg.alpha}, lambda);
  rec.seed = seed.descriptor;
  try {
    const auto relaxed = gpe::relax_ground_state(seed.psi, imaginary(cfg, cfg.alpha, lambda), relax_options(cfg));
    rec.mu_numeric = relaxed.observables.chem_potential;
    if (is_integer(cfg.alpha)) rec.residual = std::abs(*rec.mu_numeric - *rec.mu_analytic);
  } catch (const NoConvergence&) {
    rec.status = Status::no_converge;
  }
  return rec;
}

ScanRecord alpha_record(double alpha, double lambda, const SweepConfig& cfg) {
  ScanRecord rec;
  rec.lambda = lambda;
  rec.alpha = alpha;
  rec.grid_size = cfg.grid_size;
  const double dt_real = realtime_step(cfg, cfg.grid_size, alpha);
  rec.dt = dt_real;

  soliton::StationarySolution sol;
  try {
    sol = soliton::solve_soliton_branch(lambda);
  } catch (const BelowCritical&) {
    rec.status = Status::below_critical;
    rec.seed = "none";
    return rec;
  }
  rec.m = sol.m->m();
  rec.r = *sol.r;
  rec.branch = soliton::Branch::soliton;

  const FluxParameter flux{alpha};
  const auto l0 = gpe::boost_ground_level(flux);
  const double v0 = static_cast<double>(l0) + alpha;
  rec.mu_analytic = sol.chem_potential + 0.5 * v0 * v0;

  const auto plane = ring::ground_level(flux);
  const double shift = static_cast<double>(plane.levels.front().l) - alpha;
  rec.energy_uniform = soliton::energy_functional(soliton::uniform_branch(lambda)) + 0.5 * shift * shift;

  RingWavefunction start = RingWavefunction::uniform(cfg.grid_size);
  try {
    if (cfg.route == GroundRoute::boosted) {
      const auto seed = gpe::default_seed(cfg.grid_size, FluxParameter{}, lambda);
      rec.seed = "boost(" + std::to_string(l0) + ")<-" + seed.descriptor;
      const auto rest = gpe::relax_ground_state(seed.psi, imaginary(cfg, 0.0, lambda), relax_options(cfg));
      start = gpe::boost(rest.state, l0, flux, 0.0, rest.observables.chem_potential);
    } else {
      const auto seed = gpe::lump_seed(cfg.grid_size, flux, lambda);
      rec.seed = "lab<-" + seed.descriptor;
      start = gpe::relax_ground_state(seed.psi, imaginary(cfg, alpha, lambda), relax_options(cfg)).state;
    }
  } catch (const NoConvergence&) {
    rec.status = Status::no_converge;
    return rec;
  }

  const auto obs = gpe::measure(start, flux, lambda);
  rec.mu_numeric = obs.chem_potential;
  rec.energy_soliton = obs.energy;

  gpe::EvolutionConfig real;
  real.dt = dt_real;
  real.alpha = flux;
  real.lambda = lambda;
  real.mode = gpe::TimeMode::real_time;
  real.steps = static_cast<std::size_t>(std::llround(cfg.evolve_time / dt_real));
  const auto every = std::max<std::size_t>(1, std::min(cfg.snapshot_every, real.steps / 4));
  const auto snaps = gpe::evolve_with_snapshots(start, real, every);
  try {
    rec.drift_rate = gpe::drift_rate(snaps);
    rec.residual = std::abs(std::abs(*rec.drift_rate) - distance_to_integer(alpha));
  } catch (const NoLump&) {
    rec.status = Status::no_lump;
  }
  return rec;
}

// Sup error of the N-point trigonometric interpolant of the analytic profile,
// checked on a grid four times finer than the largest N in the table.
double interpolation_error(const soliton::StationarySolution& sol, std::size_t n, std::size_t reference) {
  const auto fine = spectral::resample(soliton::sample_profile(sol, n), reference);
  double worst = 0.0;
  for (std::size_t j = 0; j < reference; ++j) {
    const double exact = sol.value(RingWavefunction::grid_angle(j, reference));
    worst = std::max(worst, std::abs(fine[j] - exact));
  }
  return worst;
}

double max_energy_drift(const RingWavefunction& psi0, gpe::EvolutionConfig cfg) {
  const std::size_t steps = cfg.steps;
  cfg.steps = 1;
  const double e0 = gpe::measure(psi0, cfg.alpha, cfg.lambda).energy;
  double worst = 0.0;
  RingWavefunction psi = psi0;
  for (std::size_t s = 0; s < steps; ++s) {
    psi = gpe::evolve_real(psi, cfg);
    worst = std::max(worst, std::abs(gpe::measure(psi, cfg.alpha, cfg.lambda).energy - e0));
  }
  return worst;
}

std::string optional_cell(const std::optional<double>& v) { return v ? io::format_real(*v) : std::string(); }

nlohmann::json optional_json(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(); }

}  // namespace

const char* to_string(Status s) noexcept {
  switch (s) {
    case Status::ok: return "ok";
    case Status::below_critical: return "below_critical";
    case Status::no_converge: return "no_converge";
    case Status::no_lump: return "no_lump";
  }
  return "unknown";
}

const char* to_string(GroundRoute r) noexcept {
  return r == GroundRoute::boosted ? "boosted" : "lab_frame";
}

double distance_to_integer(double alpha) { return std::abs(alpha - std::round(alpha)); }

unsigned worker_count(unsigned requested, std::size_t jobs) {
  unsigned n = requested;
  if (n == 0) {
    if (const char* env = std::getenv("RINGLAB_THREADS")) {
      const long v = std::strtol(env, nullptr, 10);
      if (v > 0) n = static_cast<unsigned>(v);
    }
  }
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(jobs, 1)));
}

std::vector<ScanRecord> scan_lambda(std::span<const double> lambdas, const SweepConfig& cfg) {
  for (double l : lambdas) {
    if (!(l > 0.0) || !std::isfinite(l)) throw InvalidConfig("scan_lambda: couplings must be positive");
  }
  gpe::validate(imaginary(cfg, cfg.alpha, 1.0), cfg.grid_size);
  std::vector<ScanRecord> out(lambdas.size());
  run_jobs(lambdas.size(), cfg.threads, [&](std::size_t i) { out[i] = lambda_record(lambdas[i], cfg); });
  return out;
}

std::vector<ScanRecord> scan_alpha(std::span<const double> alphas, double lambda, const SweepConfig& cfg) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw InvalidConfig("scan_alpha: lambda must be positive");
  for (double a : alphas) {
    if (!std::isfinite(a)) throw InvalidConfig("scan_alpha: flux values must be finite");
    gpe::EvolutionConfig real;
    real.dt = realtime_step(cfg, cfg.grid_size, a);
    real.alpha = FluxParameter{a};
    real.lambda = lambda;
    gpe::validate(real, cfg.grid_size);
  }
  if (!(cfg.evolve_time > 0.0)) throw InvalidConfig("scan_alpha: evolve time must be positive");
  gpe::validate(imaginary(cfg, 0.0, lambda), cfg.grid_size);
  std::vector<ScanRecord> out(alphas.size());
  run_jobs(alphas.size(), cfg.threads, [&](std::size_t i) { out[i] = alpha_record(alphas[i], lambda, cfg); });
  return out;
}

std::vector<ScanRecord> convergence_table(double lambda, double alpha, std::span<const std::size_t> grid_sizes,
                                          std::span<const double> dts, const SweepConfig& cfg) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw InvalidConfig("convergence_table: lambda must be positive");
  for (std::size_t n : grid_sizes) {
    if (!RingWavefunction::valid_grid_size(n)) throw InvalidConfig("convergence_table: N must be a power of two >= 16");
  }
  for (std::size_t i = 0; i < dts.size(); ++i) {
    if (!(dts[i] > 0.0)) throw InvalidConfig("convergence_table: dt values must be positive");
    if (i > 0 && !(dts[i] < dts[i - 1])) throw InvalidConfig("convergence_table: dt values must be descending");
  }

  const bool has_soliton = lambda >= soliton::kCriticalCoupling;
  const auto sol = has_soliton ? soliton::solve_soliton_branch(lambda) : soliton::uniform_branch(lambda);
  auto base = [&](std::size_t n) {
    ScanRecord rec;
    rec.lambda = lambda;
    rec.alpha = alpha;
    rec.grid_size = n;
    if (sol.m) rec.m = sol.m->m();
    if (sol.r) rec.r = *sol.r;
    rec.mu_analytic = sol.chem_potential;
    rec.branch = sol.branch;
    return rec;
  };

  std::vector<ScanRecord> rows;
  if (!grid_sizes.empty()) {
    const std::size_t reference = 4 * *std::max_element(grid_sizes.begin(), grid_sizes.end());
    std::vector<ScanRecord> spatial(grid_sizes.size());
    run_jobs(grid_sizes.size(), cfg.threads, [&](std::size_t i) {
      spatial[i] = base(grid_sizes[i]);
      spatial[i].seed = "analytic";
      spatial[i].residual = interpolation_error(sol, grid_sizes[i], reference);
    });
    for (std::size_t i = 1; i < spatial.size(); ++i) {
      const double ratio = static_cast<double>(spatial[i].grid_size) / static_cast<double>(spatial[i - 1].grid_size);
      if (*spatial[i].residual > 0.0 && *spatial[i - 1].residual > 0.0 && ratio != 1.0) {
        spatial[i].order = std::log(*spatial[i - 1].residual / *spatial[i].residual) / std::log(ratio);
      }
    }
    rows.insert(rows.end(), spatial.begin(), spatial.end());
  }

  if (!dts.empty()) {
    std::size_t n_time = 0;
    const std::vector<std::size_t> fallback{cfg.grid_size};
    for (std::size_t n : grid_sizes.empty() ? std::span<const std::size_t>(fallback) : grid_sizes) {
      gpe::EvolutionConfig probe;
      probe.dt = dts.front();
      probe.alpha = FluxParameter{alpha};
      probe.lambda = lambda;
      try {
        gpe::validate(probe, n);
        n_time = std::max(n_time, n);
      } catch (const InvalidConfig&) {
      }
    }
    if (n_time == 0) throw InvalidConfig("convergence_table: no grid size admits the largest dt in real time");

    RingWavefunction psi0 = soliton::sample_profile(sol, n_time);
    for (std::size_t j = 0; j < n_time; ++j) psi0[j] *= 1.0 + 0.1 * std::cos(2.0 * psi0.angle(j));
    psi0 = psi0.normalized();

    constexpr double kHorizon = 2.0;
    std::vector<ScanRecord> temporal(dts.size());
    run_jobs(dts.size(), cfg.threads, [&](std::size_t i) {
      gpe::EvolutionConfig real;
      real.dt = dts[i];
      real.alpha = FluxParameter{alpha};
      real.lambda = lambda;
      real.steps = static_cast<std::size_t>(std::llround(kHorizon / dts[i]));
      temporal[i] = base(n_time);
      temporal[i].dt = dts[i];
      temporal[i].seed = "analytic*(1+0.1cos2phi)";
      temporal[i].residual = max_energy_drift(psi0, real);
    });
    for (std::size_t i = 1; i < temporal.size(); ++i) {
      if (*temporal[i].residual > 0.0 && *temporal[i - 1].residual > 0.0) {
        temporal[i].order =
            std::log(*temporal[i - 1].residual / *temporal[i].residual) / std::log(dts[i - 1] / dts[i]);
      }
    }
    rows.insert(rows.end(), temporal.begin(), temporal.end());
  }
  return rows;
}

std::string to_csv(std::span<const ScanRecord> records, bool with_order) {
  std::string out = kCsvHeader;
  if (with_order) out += ",order";
  out += '\n';
  for (const ScanRecord& r : records) {
    out += io::format_real(r.lambda) + ',' + io::format_real(r.alpha) + ',' + std::to_string(r.grid_size) + ',' +
           optional_cell(r.dt) + ',' + r.seed + ',' + optional_cell(r.m) + ',' + optional_cell(r.r) + ',' +
           optional_cell(r.mu_analytic) + ',' + optional_cell(r.mu_numeric) + ',' + optional_cell(r.energy_uniform) +
           ',' + optional_cell(r.energy_soliton) + ',' + (r.branch ? soliton::to_string(*r.branch) : "") + ',' +
           optional_cell(r.drift_rate) + ',' + optional_cell(r.residual) + ',' + to_string(r.status);
    if (with_order) out += ',' + optional_cell(r.order);
    out += '\n';
  }
  return out;
}

nlohmann::json to_json(std::span<const ScanRecord> records) {
  auto arr = nlohmann::json::array();
  for (const ScanRecord& r : records) {
    nlohmann::json o = {
        {"lambda", r.lambda},
        {"alpha", r.alpha},
        {"N", r.grid_size},
        {"dt", optional_json(r.dt)},
        {"seed", r.seed},
        {"m", optional_json(r.m)},
        {"r", optional_json(r.r)},
        {"mu_analytic", optional_json(r.mu_analytic)},
        {"mu_numeric", optional_json(r.mu_numeric)},
        {"E_uniform", optional_json(r.energy_uniform)},
        {"E_soliton", optional_json(r.energy_soliton)},
        {"branch", r.branch ? nlohmann::json(soliton::to_string(*r.branch)) : nlohmann::json()},
        {"drift_rate", optional_json(r.drift_rate)},
        {"residual", optional_json(r.residual)},
        {"status", to_string(r.status)},
    };
    if (r.order) o["order"] = *r.order;
    arr.push_back(std::move(o));
  }
  return arr;
}

}  // namespace ringlab::experiments
