#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ringlab/gpe.hpp"
#include "ringlab/wavefunction.hpp"

namespace ringlab::io {

/// 17 significant digits, scientific notation; round-trips exactly.
std::string format_real(double x);

/// One line per grid point: "phi re im".
std::string snapshot_text(const RingWavefunction& psi);

/// Inverse of snapshot_text. Throws InvalidConfig on malformed input.
RingWavefunction parse_snapshot(const std::string& text);

struct SnapshotInfo {
  double alpha = 0.0;
  double lambda = 0.0;
  double dt = 0.0;
  double t = 0.0;
};

/// {N, alpha, lambda, dt, t, norm, energy, chem_potential, centroid_angle}
/// plus the effective run configuration under "config".
nlohmann::json snapshot_sidecar(const RingWavefunction& psi, const SnapshotInfo& info,
                                const nlohmann::json& config);

/// Files staged in memory and published together: each is written to a
/// temporary sibling and renamed into place only by commit().
class OutputBatch {
 public:
  void add(std::filesystem::path path, std::string content);
  void commit();
  bool empty() const noexcept { return files_.empty(); }

 private:
  std::vector<std::pair<std::filesystem::path, std::string>> files_;
};

}  // namespace ringlab::io
