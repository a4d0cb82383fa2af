#pragma once

// Run manifests and the CSV files exchanged between bench and analytics.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "v2xauth/errors.hpp"
#include "v2xauth/simulator.hpp"

#ifndef V2XAUTH_VERSION
#define V2XAUTH_VERSION "0.0.0"
#endif

namespace v2xauth::report {

inline constexpr const char* kToolVersion = V2XAUTH_VERSION;

struct RunManifest {
  std::string command{};
  std::string config_path{};
  std::optional<std::uint64_t> seed{};  // nullopt: unseeded or not applicable
  std::vector<std::string> outputs{};
  std::string tool_version = kToolVersion;
  std::string curve{};
};

inline nlohmann::json to_json(const RunManifest& m) {
  return {{"command", m.command},
          {"config_path", m.config_path},
          {"seed", m.seed ? nlohmann::json(*m.seed) : nlohmann::json(nullptr)},
          {"outputs", m.outputs},
          {"tool_version", m.tool_version},
          {"curve", m.curve}};
}

/// Comment lines that head every CSV report.
inline std::string csv_preamble(const RunManifest& m, std::string_view source = {}) {
  std::string out = "# manifest " + to_json(m).dump() + "\n";
  if (!source.empty()) out += "# source=" + std::string(source) + "\n";
  return out;
}

inline std::string fixed4(double v) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(4) << v;
  return os.str();
}

inline constexpr std::string_view kBenchHeader =
    "k,total_comp_ms,avg_comp_ms,total_verif_ms,avg_verif_ms,total_auth_ms,avg_auth_ms";

inline std::string bench_csv(const std::vector<sim::ScalabilityRow>& rows) {
  std::string out(kBenchHeader);
  out += '\n';
  for (const auto& r : rows) {
    out += std::to_string(r.k) + "," + fixed4(r.total_comp_ms) + "," + fixed4(r.avg_comp_ms) + "," +
           fixed4(r.total_verif_ms) + "," + fixed4(r.avg_verif_ms) + "," + fixed4(r.total_auth_ms) + "," +
           fixed4(r.avg_auth_ms) + "\n";
  }
  return out;
}

/// Reads a bench CSV back; '#' lines are skipped.
inline std::vector<sim::ScalabilityRow> parse_bench_csv(std::istream& in) {
  std::vector<sim::ScalabilityRow> rows;
  std::string line;
  bool header = false;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (!header) {
      if (line != kBenchHeader) throw ConfigError("bench CSV header mismatch at line " + std::to_string(lineno));
      header = true;
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    if (cells.size() != 7) throw ConfigError("bench CSV line " + std::to_string(lineno) + " needs 7 fields");
    try {
      sim::ScalabilityRow r;
      std::size_t used = 0;
      r.k = std::stoul(cells[0], &used);
      if (used != cells[0].size()) throw std::invalid_argument("k");
      double* fields[] = {&r.total_comp_ms, &r.avg_comp_ms, &r.total_verif_ms, &r.avg_verif_ms, &r.total_auth_ms,
                          &r.avg_auth_ms};
      for (int i = 0; i < 6; ++i) {
        *fields[i] = std::stod(cells[i + 1], &used);
        if (used != cells[i + 1].size() || *fields[i] < 0) throw std::invalid_argument("value");
      }
      rows.push_back(r);
    } catch (const std::logic_error&) {
      throw ConfigError("bench CSV line " + std::to_string(lineno) + " is malformed");
    }
  }
  if (!header) throw ConfigError("bench CSV has no header");
  return rows;
}

inline std::vector<sim::ScalabilityRow> load_bench_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open bench CSV " + path.string());
  return parse_bench_csv(in);
}

/// Element-wise median over repetitions of the same sweep.
inline std::vector<sim::ScalabilityRow> median_rows(const std::vector<std::vector<sim::ScalabilityRow>>& runs) {
  if (runs.empty()) return {};
  auto median = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
  };
  std::vector<sim::ScalabilityRow> out;
  for (std::size_t i = 0; i < runs.front().size(); ++i) {
    sim::ScalabilityRow r;
    r.k = runs.front()[i].k;
    double sim::ScalabilityRow::*fields[] = {&sim::ScalabilityRow::total_comp_ms,  &sim::ScalabilityRow::avg_comp_ms,
                                             &sim::ScalabilityRow::total_verif_ms, &sim::ScalabilityRow::avg_verif_ms,
                                             &sim::ScalabilityRow::total_auth_ms,  &sim::ScalabilityRow::avg_auth_ms};
    for (auto f : fields) {
      std::vector<double> samples;
      for (const auto& run : runs) samples.push_back(run.at(i).*f);
      r.*f = median(samples);
    }
    out.push_back(r);
  }
  return out;
}

}  // namespace v2xauth::report
