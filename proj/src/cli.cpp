#include "ringlab/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ringlab/elliptic.hpp"
#include "ringlab/errors.hpp"
#include "ringlab/experiments.hpp"
#include "ringlab/gpe.hpp"
#include "ringlab/io.hpp"
#include "ringlab/ring_particle.hpp"
#include "ringlab/soliton.hpp"

namespace ringlab::cli {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_real(const std::string& text) {
  const std::string t = trim(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    throw InvalidConfig("not a number: '" + text + "'");
  }
  if (used != t.size()) throw InvalidConfig("not a number: '" + text + "'");
  return v;
}

std::vector<std::size_t> parse_size_list(const std::string& text) {
  std::vector<std::size_t> out;
  for (double v : parse_real_list(text)) {
    if (!(v >= 1.0) || v != std::floor(v)) throw InvalidConfig("grid sizes must be positive integers");
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

fs::path sidecar_path(const fs::path& data) {
  fs::path p = data;
  if (p.extension() == ".json") return fs::path(p.string() + ".meta.json");
  return p.replace_extension(".json");
}

// Echo of every option of the active subcommand, flags and config merged.
json effective_config(const CLI::App& sub) {
  json cfg = json::object();
  cfg["subcommand"] = sub.get_name();
  for (const CLI::Option* opt : sub.get_options()) {
    if (opt->get_lnames().empty()) continue;
    const std::string& name = opt->get_lnames().front();
    if (name == "help") continue;
    if (opt->count() > 0) {
      const auto& res = opt->results();
      cfg[name] = res.size() == 1 ? json(res.front()) : json(res);
    } else if (!opt->get_default_str().empty()) {
      cfg[name] = opt->get_default_str();
    } else {
      cfg[name] = nullptr;
    }
  }
  return cfg;
}

// Flags win: config keys only fill options absent from the command line.
std::vector<std::string> merge_config(std::vector<std::string> args) {
  std::optional<std::string> path;
  std::vector<std::string> kept;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw InvalidConfig("--config needs a file path");
      path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    } else {
      kept.push_back(args[i]);
    }
  }
  if (!path) return kept;
  std::ifstream in(*path);
  if (!in) throw InvalidConfig("cannot read config file " + *path);
  std::stringstream buf;
  buf << in.rdbuf();
  for (const auto& [key, value] : parse_config(buf.str())) {
    const std::string flag = "--" + key;
    bool present = false;
    for (const auto& a : kept) present = present || a == flag || a.rfind(flag + "=", 0) == 0;
    if (!present) {
      kept.push_back(flag);
      kept.push_back(value);
    }
  }
  return kept;
}

void emit(std::ostream& out, const json& j) { out << j.dump() << '\n'; }

json observables_json(const gpe::Observables& o) {
  return {{"norm", o.norm},
          {"energy", o.energy},
          {"chem_potential", o.chem_potential},
          {"current", o.current},
          {"centroid_angle", o.centroid_angle},
          {"centroid_magnitude", o.centroid_magnitude}};
}

struct EllipticArgs {
  std::optional<double> m;
  std::optional<double> u;
  std::optional<double> invert;
};

int cmd_elliptic(const EllipticArgs& a, std::ostream& out) {
  if (!a.m && !a.invert) throw InvalidConfig("elliptic: give --m and/or --invert-product");
  if (a.u && !a.m) throw InvalidConfig("elliptic: --u needs --m");
  json j = json::object();
  if (a.m) {
    const elliptic::EllipticParameter p(*a.m);
    j["m"] = *a.m;
    j["K"] = p.complement() > 0.0 ? json(elliptic::complete_K(p)) : json();
    j["E"] = elliptic::complete_E(p);
    if (a.u) {
      const auto v = elliptic::jacobi(*a.u, p);
      j["u"] = *a.u;
      j["sn"] = v.sn;
      j["cn"] = v.cn;
      j["dn"] = v.dn;
    }
  }
  if (a.invert) {
    const auto p = elliptic::invert_product(*a.invert);
    const double product = elliptic::complete_E(p) * elliptic::complete_K(p);
    j["invert"] = {{"target", *a.invert},
                   {"m", p.m()},
                   {"complement", p.complement()},
                   {"residual", std::abs(product - *a.invert)}};
  }
  emit(out, j);
  return 0;
}

struct RingArgs {
  double alpha = 0.0;
  double tie_tol = ring::kDefaultTieTol;
  int span = 2;
};

int cmd_ring(const RingArgs& a, std::ostream& out) {
  if (!std::isfinite(a.alpha)) throw InvalidConfig("ring: alpha must be finite");
  if (!(a.tie_tol >= 0.0)) throw InvalidConfig("ring: tie-tol must be non-negative");
  if (a.span < 0) throw InvalidConfig("ring: span must be non-negative");
  const ring::FluxParameter flux{a.alpha};
  const auto g = ring::ground_level(flux, a.tie_tol);

  json levels = json::array();
  json velocities = json::array();
  for (const auto& l : g.levels) {
    levels.push_back(l.l);
    velocities.push_back(ring::level_velocity(l, flux));
  }
  json spectrum = json::array();
  const auto centre = g.levels.front().l;
  for (std::int64_t l = centre - a.span; l <= centre + a.span; ++l) {
    const ring::AngularMomentumLevel lv{l};
    spectrum.push_back({{"l", l}, {"energy", ring::level_energy(lv, flux)}, {"velocity", ring::level_velocity(lv, flux)}});
  }
  json reversal = nullptr;
  try {
    reversal = json::array();
    for (const auto& l : g.levels) {
      reversal.push_back({{"l", l.l}, {"image", ring::modified_time_reversal(l, flux).l}});
    }
  } catch (const NonIntegerImage&) {
    reversal = nullptr;
  }
  emit(out, {{"alpha", a.alpha},
             {"ground", {{"levels", levels}, {"energy", g.energy}, {"degenerate", g.degenerate}, {"velocities", velocities}}},
             {"spectrum", spectrum},
             {"time_reversal", reversal}});
  return 0;
}

struct StationaryArgs {
  double lambda = 0.0;
  double beta = 0.0;
  std::size_t grid = 0;
  std::string out;
};

int cmd_stationary(const StationaryArgs& a, const json& config, std::ostream& out) {
  if (!(a.lambda > 0.0) || !std::isfinite(a.lambda)) throw InvalidConfig("stationary: lambda must be positive");
  if (a.grid != 0 && !RingWavefunction::valid_grid_size(a.grid)) {
    throw InvalidConfig("stationary: N must be a power of two >= 16");
  }
  if (!a.out.empty() && a.grid == 0) throw InvalidConfig("stationary: --out needs --N");

  const auto cmp = soliton::compare_branches(a.lambda);
  json j = {{"lambda", a.lambda},
            {"critical_coupling", soliton::kCriticalCoupling},
            {"uniform", {{"chem_potential", cmp.uniform.chem_potential}, {"energy", cmp.energy_uniform}}},
            {"selected", soliton::to_string(cmp.selected)}};
  if (cmp.soliton) {
    const auto& s = *cmp.soliton;
    const double k = elliptic::complete_K(*s.m);
    const double e = elliptic::complete_E(*s.m);
    const double root = std::sqrt(a.lambda);
    j["soliton"] = {{"m", s.m->m()},
                    {"complement", s.m->complement()},
                    {"r", *s.r},
                    {"chem_potential", s.chem_potential},
                    {"energy", *cmp.energy_soliton},
                    {"K", k},
                    {"E", e},
                    {"periodicity_residual", std::abs(k - std::numbers::pi * *s.r * root)},
                    {"normalization_residual", std::abs(e - root / (2.0 * *s.r))}};
  } else {
    j["soliton"] = nullptr;
  }

  if (a.grid != 0) {
    auto chosen = cmp.selected == soliton::Branch::soliton ? *cmp.soliton : cmp.uniform;
    chosen.beta = a.beta;
    const auto psi = soliton::sample_profile(chosen, a.grid);
    j["profile_norm"] = psi.norm();
    if (!a.out.empty()) {
      io::OutputBatch batch;
      batch.add(a.out, io::snapshot_text(psi));
      batch.add(sidecar_path(a.out), io::snapshot_sidecar(psi, {0.0, a.lambda, 0.0, 0.0}, config).dump(2));
      batch.commit();
    }
  }
  emit(out, j);
  return 0;
}

struct DynamicsArgs {
  double lambda = 0.0;
  double alpha = 0.0;
  std::size_t grid = 256;
  double dt = 1e-3;
  double tol = 1e-10;
  std::size_t max_steps = 2'000'000;
  std::string seed = "auto";
  std::string out;
  std::size_t steps = 10'000;
  std::size_t every = 1'000;
  std::string init = "soliton";
  std::optional<long long> level;
  double time = 10.0;
};

RingWavefunction read_snapshot_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidConfig("cannot read snapshot " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return io::parse_snapshot(buf.str());
}

gpe::Seed choose_seed(const DynamicsArgs& a) {
  const gpe::FluxParameter flux{a.alpha};
  if (a.seed == "auto") return gpe::default_seed(a.grid, flux, a.lambda);
  if (a.seed == "uniform") return {RingWavefunction::uniform(a.grid), "uniform"};
  if (a.seed == "lump") return gpe::lump_seed(a.grid, flux, a.lambda);
  if (a.seed.rfind("file:", 0) == 0) return {read_snapshot_file(a.seed.substr(5)), a.seed};
  throw InvalidConfig("unknown seed '" + a.seed + "' (auto, uniform, lump, file:<path>)");
}

int cmd_relax(const DynamicsArgs& a, const json& config, std::ostream& out) {
  gpe::EvolutionConfig cfg;
  cfg.dt = a.dt;
  cfg.alpha = gpe::FluxParameter{a.alpha};
  cfg.lambda = a.lambda;
  cfg.mode = gpe::TimeMode::imaginary_time;
  gpe::validate(cfg, a.grid);
  if (!(a.tol > 0.0)) throw InvalidConfig("relax: tol must be positive");

  const auto seed = choose_seed(a);
  if (seed.psi.size() != a.grid) throw InvalidConfig("relax: seed grid does not match --N");
  gpe::RelaxOptions opts;
  opts.tol = a.tol;
  opts.max_steps = a.max_steps;
  const auto result = gpe::relax_ground_state(seed.psi, cfg, opts);

  json j = observables_json(result.observables);
  j["seed"] = seed.descriptor;
  j["steps"] = result.steps;
  j["polish_iterations"] = result.polish_iterations;
  j["residual"] = result.residual;
  if (!a.out.empty()) {
    io::OutputBatch batch;
    batch.add(a.out, io::snapshot_text(result.state));
    auto side = io::snapshot_sidecar(result.state, {a.alpha, a.lambda, a.dt, 0.0}, config);
    side["seed"] = seed.descriptor;
    batch.add(sidecar_path(a.out), side.dump(2));
    batch.commit();
  }
  emit(out, j);
  return 0;
}

RingWavefunction initial_state(const DynamicsArgs& a, std::string& descriptor) {
  const gpe::FluxParameter flux{a.alpha};
  if (a.init == "uniform") {
    descriptor = "uniform";
    return RingWavefunction::uniform(a.grid);
  }
  if (a.init == "soliton") {
    descriptor = "soliton";
    return soliton::sample_profile(soliton::solve_soliton_branch(a.lambda), a.grid);
  }
  if (a.init == "boosted") {
    const auto sol = soliton::solve_soliton_branch(a.lambda);
    const auto l = a.level ? *a.level : gpe::boost_ground_level(flux);
    descriptor = "boost(" + std::to_string(l) + ")";
    return gpe::boost(soliton::sample_profile(sol, a.grid), l, flux, 0.0, sol.chem_potential);
  }
  if (a.init == "relaxed") {
    gpe::EvolutionConfig cfg;
    cfg.dt = a.dt;
    cfg.alpha = flux;
    cfg.lambda = a.lambda;
    cfg.mode = gpe::TimeMode::imaginary_time;
    const auto seed = a.lambda > soliton::kCriticalCoupling ? gpe::lump_seed(a.grid, flux, a.lambda)
                                                            : gpe::default_seed(a.grid, flux, a.lambda);
    descriptor = "relaxed<-" + seed.descriptor;
    return gpe::relax_ground_state(seed.psi, cfg, a.tol).state;
  }
  if (a.init.rfind("file:", 0) == 0) {
    descriptor = a.init;
    return read_snapshot_file(a.init.substr(5));
  }
  throw InvalidConfig("unknown init '" + a.init + "' (uniform, soliton, boosted, relaxed, file:<path>)");
}

std::string indexed(const std::string& prefix, std::size_t i, const char* ext) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "_%04zu", i);
  return prefix + buf + ext;
}

int cmd_evolve(const DynamicsArgs& a, const json& config, std::ostream& out) {
  gpe::EvolutionConfig cfg;
  cfg.dt = a.dt;
  cfg.steps = a.steps;
  cfg.alpha = gpe::FluxParameter{a.alpha};
  cfg.lambda = a.lambda;
  gpe::validate(cfg, a.grid);
  if (a.every == 0) throw InvalidConfig("evolve: --every must be positive");

  std::string descriptor;
  const RingWavefunction psi0 = initial_state(a, descriptor);
  if (psi0.size() != a.grid) throw InvalidConfig("evolve: initial state grid does not match --N");
  const auto snaps = gpe::evolve_with_snapshots(psi0, cfg, a.every);

  const auto first = gpe::measure(snaps.front().psi, cfg.alpha, cfg.lambda);
  const auto last = gpe::measure(snaps.back().psi, cfg.alpha, cfg.lambda);
  json j = {{"init", descriptor},
            {"snapshots", snaps.size()},
            {"t_final", snaps.back().t},
            {"final", observables_json(last)},
            {"norm_drift", std::abs(last.norm - first.norm)},
            {"energy_drift", std::abs(last.energy - first.energy)}};
  try {
    j["drift_rate"] = gpe::drift_rate(snaps);
  } catch (const NoLump&) {
    j["drift_rate"] = nullptr;
  }

  if (!a.out.empty()) {
    io::OutputBatch batch;
    for (std::size_t i = 0; i < snaps.size(); ++i) {
      batch.add(indexed(a.out, i, ".txt"), io::snapshot_text(snaps[i].psi));
      batch.add(indexed(a.out, i, ".json"),
                io::snapshot_sidecar(snaps[i].psi, {a.alpha, a.lambda, a.dt, snaps[i].t}, config).dump(2));
    }
    json summary = j;
    summary["config"] = config;
    batch.add(a.out + "_summary.json", summary.dump(2));
    batch.commit();
  }
  emit(out, j);
  return 0;
}

int cmd_boost(const DynamicsArgs& a, const json& config, std::ostream& out) {
  const gpe::FluxParameter flux{a.alpha};
  gpe::EvolutionConfig cfg;
  cfg.dt = a.dt;
  cfg.alpha = flux;
  cfg.lambda = a.lambda;
  gpe::validate(cfg, a.grid);
  if (!(a.time > 0.0)) throw InvalidConfig("boost: --t must be positive");

  const auto sol = soliton::solve_soliton_branch(a.lambda);
  const auto rest = soliton::sample_profile(sol, a.grid);
  const auto l = a.level ? *a.level : gpe::boost_ground_level(flux);
  const double e0 = sol.chem_potential;

  // Residual of the mean-field equation at t by centred differences in time.
  constexpr double h = 1e-4;
  const auto at = [&](double t) { return gpe::boost(rest, l, flux, t, e0); };
  const auto psi_t = at(a.time);
  const auto plus = at(a.time + h);
  const auto minus = at(a.time - h);
  const auto hpsi = gpe::apply_hamiltonian(psi_t, flux, a.lambda);
  double residual = 0.0;
  for (std::size_t j = 0; j < psi_t.size(); ++j) {
    const Complex dpsi = (plus[j] - minus[j]) / (2.0 * h);
    residual = std::max(residual, std::abs(Complex(0.0, 1.0) * dpsi - hpsi[j]));
  }

  cfg.steps = static_cast<std::size_t>(std::llround(a.time / a.dt));
  const auto start = at(0.0);
  const auto snaps = gpe::evolve_with_snapshots(start, cfg, std::max<std::size_t>(1, cfg.steps / 20));
  const double measured = gpe::drift_rate(snaps);
  const double predicted = -(static_cast<double>(l) + a.alpha);

  json j = {{"l", l},
            {"alpha", a.alpha},
            {"lambda", a.lambda},
            {"predicted_drift", predicted},
            {"measured_drift", measured},
            {"frequency", e0 + 0.5 * predicted * predicted},
            {"equation_residual", residual},
            {"energy", gpe::measure(start, flux, a.lambda).energy}};
  if (!a.out.empty()) {
    io::OutputBatch batch;
    batch.add(a.out, io::snapshot_text(start));
    auto side = io::snapshot_sidecar(start, {a.alpha, a.lambda, a.dt, 0.0}, config);
    side["boost"] = j;
    batch.add(sidecar_path(a.out), side.dump(2));
    batch.commit();
  }
  emit(out, j);
  return 0;
}

struct ScanArgs {
  std::string mode;
  std::string lambdas;
  std::string alphas;
  double lambda = 3.0;
  double alpha = 0.0;
  std::size_t grid = 128;
  double dt = 1e-3;
  double tol = 1e-10;
  std::string route = "boosted";
  double time = 10.0;
  unsigned threads = 0;
  std::string out;
  std::string Ns = "64,128,256";
  std::string dts = "4e-3,2e-3,1e-3";
};

void write_table(const std::vector<experiments::ScanRecord>& rows, bool with_order, const ScanArgs& a,
                 const json& config, std::ostream& out) {
  const std::string csv = experiments::to_csv(rows, with_order);
  if (a.out.empty()) {
    out << csv;
    return;
  }
  io::OutputBatch batch;
  batch.add(a.out, csv);
  batch.add(sidecar_path(a.out), json{{"config", config}, {"records", experiments::to_json(rows)}}.dump(2));
  batch.commit();
  emit(out, {{"rows", rows.size()}, {"csv", a.out}, {"json", sidecar_path(a.out).string()}});
}

int cmd_scan(const ScanArgs& a, const json& config, std::ostream& out) {
  experiments::SweepConfig cfg;
  cfg.grid_size = a.grid;
  cfg.dt = a.dt;
  cfg.tol = a.tol;
  cfg.alpha = a.alpha;
  cfg.evolve_time = a.time;
  cfg.threads = a.threads;
  if (a.route == "boosted") {
    cfg.route = experiments::GroundRoute::boosted;
  } else if (a.route == "lab") {
    cfg.route = experiments::GroundRoute::lab_frame;
  } else {
    throw InvalidConfig("scan: route must be 'boosted' or 'lab'");
  }

  std::vector<experiments::ScanRecord> rows;
  if (a.mode == "lambda") {
    if (a.lambdas.empty()) throw InvalidConfig("scan: --mode lambda needs --lambdas");
    rows = experiments::scan_lambda(parse_real_list(a.lambdas), cfg);
  } else if (a.mode == "alpha") {
    if (a.alphas.empty()) throw InvalidConfig("scan: --mode alpha needs --alphas");
    rows = experiments::scan_alpha(parse_real_list(a.alphas), a.lambda, cfg);
  } else {
    throw InvalidConfig("scan: --mode must be 'lambda' or 'alpha'");
  }
  write_table(rows, false, a, config, out);
  return 0;
}

int cmd_converge(const ScanArgs& a, const json& config, std::ostream& out) {
  experiments::SweepConfig cfg;
  cfg.threads = a.threads;
  // "none" skips that half of the table
  const auto ns = a.Ns == "none" ? std::vector<std::size_t>{} : parse_size_list(a.Ns);
  const auto dts = a.dts == "none" ? std::vector<double>{} : parse_real_list(a.dts);
  const auto rows = experiments::convergence_table(a.lambda, a.alpha, ns, dts, cfg);
  write_table(rows, true, a, config, out);
  return 0;
}

void error_line(std::ostream& err, const char* kind, const std::string& message) {
  err << json{{"error", kind}, {"message", message}}.dump() << '\n';
}

}  // namespace

std::vector<double> parse_real_list(const std::string& text) {
  const std::string s = trim(text);
  if (s.empty()) throw InvalidConfig("empty list");
  std::vector<double> out;
  if (s.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream in(s);
    std::string part;
    while (std::getline(in, part, ':')) parts.push_back(part);
    if (parts.size() != 3) throw InvalidConfig("range must be start:step:stop, got '" + text + "'");
    const double start = parse_real(parts[0]);
    const double step = parse_real(parts[1]);
    const double stop = parse_real(parts[2]);
    if (!(step > 0.0) || !(stop >= start)) throw InvalidConfig("range needs step > 0 and stop >= start");
    const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 0.5)) + 1;
    if (count > 1'000'000) throw InvalidConfig("range has too many points");
    for (std::size_t i = 0; i < count; ++i) out.push_back(start + static_cast<double>(i) * step);
    // points reach stop + step/2; a last point within rounding of stop lands on it
    if (std::abs(out.back() - stop) <= 1e-9 * step) out.back() = stop;
    return out;
  }
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(parse_real(item));
  return out;
}

std::map<std::string, std::string> parse_config(const std::string& text) {
  std::map<std::string, std::string> out;
  std::stringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw InvalidConfig("config line " + std::to_string(lineno) + ": expected key=value");
    }
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw InvalidConfig("config line " + std::to_string(lineno) + ": empty key");
    out[key] = trim(line.substr(eq + 1));
  }
  return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"ringlab: flux-threaded ring particle and mean-field soliton toolkit", "ringlab"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);

  EllipticArgs ell;
  auto* elliptic_cmd = app.add_subcommand("elliptic", "K(m), E(m), sn/cn/dn, or invert E(m)K(m) = target");
  elliptic_cmd->add_option("--m", ell.m, "elliptic parameter m = k^2");
  elliptic_cmd->add_option("--u", ell.u, "argument of sn, cn, dn");
  elliptic_cmd->add_option("--invert-product", ell.invert, "solve E(m)K(m) = target");

  RingArgs ring_args;
  auto* ring_cmd = app.add_subcommand("ring", "single-particle spectrum and ground level at flux alpha");
  ring_cmd->add_option("--alpha", ring_args.alpha, "flux parameter")->required();
  ring_cmd->add_option("--tie-tol", ring_args.tie_tol, "half-integer tie tolerance");
  ring_cmd->add_option("--span", ring_args.span, "levels listed on each side of the ground level");

  StationaryArgs st;
  auto* stationary_cmd = app.add_subcommand("stationary", "analytic uniform and dn-soliton branches at lambda");
  stationary_cmd->add_option("--lambda", st.lambda, "coupling")->required();
  stationary_cmd->add_option("--beta", st.beta, "translation offset of the sampled profile");
  stationary_cmd->add_option("--N", st.grid, "grid size for the sampled ground profile (0: none)");
  stationary_cmd->add_option("--out", st.out, "profile snapshot path");

  DynamicsArgs dyn;
  auto* relax_cmd = app.add_subcommand("relax", "imaginary-time ground state");
  relax_cmd->add_option("--lambda", dyn.lambda, "coupling")->required();
  relax_cmd->add_option("--alpha", dyn.alpha, "flux parameter");
  relax_cmd->add_option("--N", dyn.grid, "grid size");
  relax_cmd->add_option("--dt", dyn.dt, "imaginary time step");
  relax_cmd->add_option("--tol", dyn.tol, "|delta mu| per step and final eigen-residual tolerance");
  relax_cmd->add_option("--max-steps", dyn.max_steps, "step cap");
  relax_cmd->add_option("--seed", dyn.seed, "auto, uniform, lump, or file:<snapshot>");
  relax_cmd->add_option("--out", dyn.out, "snapshot path (sidecar written next to it)");

  auto* evolve_cmd = app.add_subcommand("evolve", "real-time split-step evolution with snapshots");
  evolve_cmd->add_option("--lambda", dyn.lambda, "coupling")->required();
  evolve_cmd->add_option("--alpha", dyn.alpha, "flux parameter");
  evolve_cmd->add_option("--N", dyn.grid, "grid size")->default_val(128);
  evolve_cmd->add_option("--dt", dyn.dt, "time step");
  evolve_cmd->add_option("--steps", dyn.steps, "number of steps");
  evolve_cmd->add_option("--every", dyn.every, "steps between snapshots");
  evolve_cmd->add_option("--init", dyn.init, "uniform, soliton, boosted, relaxed, or file:<snapshot>");
  evolve_cmd->add_option("--l", dyn.level, "boost label for --init boosted (default: ground)");
  evolve_cmd->add_option("--tol", dyn.tol, "relaxation tolerance for --init relaxed");
  evolve_cmd->add_option("--out", dyn.out, "snapshot file prefix");

  auto* boost_cmd = app.add_subcommand("boost", "build a moving lump from the flux-free soliton and verify it");
  boost_cmd->add_option("--lambda", dyn.lambda, "coupling")->required();
  boost_cmd->add_option("--alpha", dyn.alpha, "flux parameter");
  boost_cmd->add_option("--l", dyn.level, "boost label (default: minimizes |l + alpha|)");
  boost_cmd->add_option("--N", dyn.grid, "grid size")->default_val(128);
  boost_cmd->add_option("--dt", dyn.dt, "time step for the verification run");
  boost_cmd->add_option("--t", dyn.time, "verification horizon");
  boost_cmd->add_option("--out", dyn.out, "snapshot path of the boosted state at t = 0");

  ScanArgs sc;
  auto* scan_cmd = app.add_subcommand("scan", "lambda or alpha sweep to CSV");
  scan_cmd->add_option("--mode", sc.mode, "lambda or alpha")->required();
  scan_cmd->add_option("--lambdas", sc.lambdas, "couplings: list or start:step:stop");
  scan_cmd->add_option("--alphas", sc.alphas, "fluxes: list or start:step:stop");
  scan_cmd->add_option("--lambda", sc.lambda, "coupling for alpha sweeps");
  scan_cmd->add_option("--alpha", sc.alpha, "flux for lambda sweeps");
  scan_cmd->add_option("--N", sc.grid, "grid size");
  scan_cmd->add_option("--dt", sc.dt, "imaginary time step");
  scan_cmd->add_option("--tol", sc.tol, "relaxation tolerance");
  scan_cmd->add_option("--route", sc.route, "alpha sweeps: boosted or lab");
  scan_cmd->add_option("--time", sc.time, "real-time horizon for drift fits");
  scan_cmd->add_option("--threads", sc.threads, "worker cap (0: RINGLAB_THREADS or all cores)");
  scan_cmd->add_option("--out", sc.out, "CSV path (JSON mirror written next to it)");

  auto* converge_cmd = app.add_subcommand("converge", "spatial and temporal discretization table");
  converge_cmd->add_option("--lambda", sc.lambda, "coupling");
  converge_cmd->add_option("--alpha", sc.alpha, "flux parameter");
  converge_cmd->add_option("--Ns", sc.Ns, "grid sizes for the spatial rows, or none");
  converge_cmd->add_option("--dts", sc.dts, "descending time steps for the temporal rows, or none");
  converge_cmd->add_option("--threads", sc.threads, "worker cap");
  converge_cmd->add_option("--out", sc.out, "CSV path");

  try {
    const auto merged = merge_config(args);
    std::vector<std::string> reversed(merged.rbegin(), merged.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << app.help();
    error_line(err, "usage", e.what());
    return 1;
  } catch (const InvalidConfig& e) {
    error_line(err, "invalid_config", e.what());
    return 1;
  }

  try {
    for (CLI::App* sub : app.get_subcommands()) {
      if (sub->get_name() == "elliptic") return cmd_elliptic(ell, out);
      if (sub->get_name() == "ring") return cmd_ring(ring_args, out);
      const json config = effective_config(*sub);
      if (sub->get_name() == "stationary") return cmd_stationary(st, config, out);
      if (sub->get_name() == "relax") return cmd_relax(dyn, config, out);
      if (sub->get_name() == "evolve") return cmd_evolve(dyn, config, out);
      if (sub->get_name() == "boost") return cmd_boost(dyn, config, out);
      if (sub->get_name() == "scan") return cmd_scan(sc, config, out);
      if (sub->get_name() == "converge") return cmd_converge(sc, config, out);
    }
  } catch (const NoConvergence& e) {
    error_line(err, "no_convergence", e.what());
    return 2;
  } catch (const BelowCritical& e) {
    error_line(err, "below_critical", e.what());
    return 2;
  } catch (const InfeasibleTarget& e) {
    error_line(err, "infeasible_target", e.what());
    return 2;
  } catch (const NoLump& e) {
    error_line(err, "no_lump", e.what());
    return 2;
  } catch (const InvalidConfig& e) {
    error_line(err, "invalid_config", e.what());
    return 1;
  } catch (const DomainError& e) {
    error_line(err, "domain_error", e.what());
    return 1;
  } catch (const std::exception& e) {
    error_line(err, "io_error", e.what());
    return 1;
  }
  return 1;
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace ringlab::cli
