#include "ringlab/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

#include "ringlab/errors.hpp"

namespace ringlab::io {

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", x);
  return buf;
}

std::string snapshot_text(const RingWavefunction& psi) {
  std::string out;
  out.reserve(psi.size() * 72);
  for (std::size_t j = 0; j < psi.size(); ++j) {
    out += format_real(psi.angle(j));
    out += ' ';
    out += format_real(psi[j].real());
    out += ' ';
    out += format_real(psi[j].imag());
    out += '\n';
  }
  return out;
}

RingWavefunction parse_snapshot(const std::string& text) {
  std::istringstream in(text);
  std::vector<Complex> samples;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    double phi = 0.0;
    double re = 0.0;
    double im = 0.0;
    if (!(fields >> phi >> re >> im)) throw InvalidConfig("malformed snapshot line: " + line);
    samples.emplace_back(re, im);
  }
  return RingWavefunction(std::move(samples));
}

nlohmann::json snapshot_sidecar(const RingWavefunction& psi, const SnapshotInfo& info,
                                const nlohmann::json& config) {
  const auto obs = gpe::measure(psi, gpe::FluxParameter{info.alpha}, info.lambda);
  return {
      {"N", psi.size()},
      {"alpha", info.alpha},
      {"lambda", info.lambda},
      {"dt", info.dt},
      {"t", info.t},
      {"norm", obs.norm},
      {"energy", obs.energy},
      {"chem_potential", obs.chem_potential},
      {"centroid_angle", obs.centroid_angle},
      {"config", config},
  };
}

void OutputBatch::add(std::filesystem::path path, std::string content) {
  files_.emplace_back(std::move(path), std::move(content));
}

void OutputBatch::commit() {
  std::vector<std::filesystem::path> staged;
  auto discard = [&] {
    std::error_code ec;
    for (const auto& p : staged) std::filesystem::remove(p, ec);
  };
  for (const auto& [path, content] : files_) {
    auto tmp = path;
    tmp += ".tmp";
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << content;
    out.close();
    staged.push_back(tmp);
    if (!out) {
      discard();
      throw std::runtime_error("cannot write " + tmp.string());
    }
  }
  for (std::size_t i = 0; i < files_.size(); ++i) {
    std::filesystem::rename(staged[i], files_[i].first);
  }
  files_.clear();
}

}  // namespace ringlab::io
