#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "ringlab/soliton.hpp"

namespace ringlab::experiments {

enum class Status { ok, below_critical, no_converge, no_lump };

const char* to_string(Status s) noexcept;

/// How scan_alpha obtains the flux-alpha lump it then evolves in real time.
enum class GroundRoute {
  boosted,    // relax at alpha = 0, then boost with l0 minimizing |l + alpha|
  lab_frame,  // relax directly at flux alpha from a lump seed
};

const char* to_string(GroundRoute r) noexcept;

struct ScanRecord {
  double lambda = 0.0;
  double alpha = 0.0;
  std::size_t grid_size = 0;
  std::optional<double> dt;
  std::string seed;

  std::optional<double> m;
  std::optional<double> r;
  std::optional<double> mu_analytic;
  std::optional<double> mu_numeric;
  std::optional<double> energy_uniform;
  std::optional<double> energy_soliton;
  std::optional<soliton::Branch> branch;
  std::optional<double> drift_rate;
  std::optional<double> residual;
  Status status = Status::ok;

  // Convergence tables only: order estimate against the previous row.
  std::optional<double> order;
};

struct SweepConfig {
  std::size_t grid_size = 256;
  double dt = 1e-3;  // imaginary-time step
  double tol = 1e-10;
  std::size_t max_steps = 2'000'000;
  double alpha = 0.0;  // flux for scan_lambda
  GroundRoute route = GroundRoute::boosted;
  double evolve_time = 10.0;
  double realtime_dt = 0.0;  // <= 0 picks min(1e-3, half the stability bound)
  std::size_t snapshot_every = 250;
  unsigned threads = 0;  // 0: RINGLAB_THREADS, else hardware concurrency
};

/// Analytic branches, relaxed ground state and verdict per coupling.
std::vector<ScanRecord> scan_lambda(std::span<const double> lambdas, const SweepConfig& cfg);

/// Ground lump at each flux, evolved in real time; drift from the centroid.
/// residual = | |drift| - dist(alpha, Z) |.
std::vector<ScanRecord> scan_alpha(std::span<const double> alphas, double lambda, const SweepConfig& cfg);

/// Spatial rows (dt absent): sup error of the N-point spectral interpolant of
/// the analytic profile. Temporal rows: max energy drift of a perturbed soliton
/// over t = 2 at the largest N whose stability bound admits every dt
/// (cfg.grid_size when grid_sizes is empty).
std::vector<ScanRecord> convergence_table(double lambda, double alpha, std::span<const std::size_t> grid_sizes,
                                          std::span<const double> dts, const SweepConfig& cfg = {});

inline constexpr const char* kCsvHeader =
    "lambda,alpha,N,dt,seed,m,r,mu_analytic,mu_numeric,E_uniform,E_soliton,branch,drift_rate,residual,status";

std::string to_csv(std::span<const ScanRecord> records, bool with_order = false);
nlohmann::json to_json(std::span<const ScanRecord> records);

/// Worker count for sweeps: explicit request, else RINGLAB_THREADS, else
/// hardware concurrency; never more than `jobs`.
unsigned worker_count(unsigned requested, std::size_t jobs);

/// dist(alpha, Z).
double distance_to_integer(double alpha);

}  // namespace ringlab::experiments
