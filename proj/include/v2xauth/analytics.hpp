#pragma once

// Closed-form signaling overhead and latency for sidelink (PC5) and
// base-station relayed (Uu) links. Byte paths are integer-only.

#include <array>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "v2xauth/errors.hpp"

namespace v2xauth::analytics {

// Wire units on the 512-bit profile.
inline constexpr std::uint64_t kAssignmentBytes = 256;    // x_i, Y_i, H(f(0)G)
inline constexpr std::uint64_t kIdentifierBytes = 64;     // x_i broadcast
inline constexpr std::uint64_t kContributionBytes = 128;  // C_i broadcast

enum class Interface { kPC5, kUu };

inline std::string_view interface_name(Interface i) { return i == Interface::kPC5 ? "PC5" : "Uu"; }

inline Interface parse_interface(std::string_view s) {
  if (s == "PC5" || s == "pc5") return Interface::kPC5;
  if (s == "Uu" || s == "uu" || s == "UU") return Interface::kUu;
  throw ConfigError("unknown interface '" + std::string(s) + "' (PC5|Uu)");
}

struct LinkProfile {
  Interface interface = Interface::kPC5;
  double data_rate = 10e6;  // bits per second

  static LinkProfile pc5(double rate = 10e6) { return make(Interface::kPC5, rate); }
  static LinkProfile uu(double rate = 100e6) { return make(Interface::kUu, rate); }

  static LinkProfile make(Interface i, double rate) {
    if (!(rate > 0) || !std::isfinite(rate)) throw ConfigError("data rate must be positive");
    return LinkProfile{i, rate};
  }
};

struct PhaseBytes {
  std::uint64_t assignment_bytes = 0;
  std::uint64_t interpolation_bytes = 0;
  std::uint64_t contribution_bytes = 0;
  std::uint64_t total_bytes = 0;
};

struct LatencyReport {
  std::size_t k = 0;
  Interface interface = Interface::kPC5;
  double transmission_ms = 0;
  double computation_ms = 0;
  double total_latency_ms = 0;
  std::uint64_t signaling_overhead_bytes = 0;
};

namespace detail {
inline void require_k(std::size_t k) {
  if (k == 0) throw ConfigError("group size k must be at least 1");
}
}  // namespace detail

/// What one vehicle receives over a session: its assignment plus every
/// peer's identifier and contribution.
inline PhaseBytes per_vehicle_overhead(std::size_t k) {
  detail::require_k(k);
  const std::uint64_t peers = k - 1;
  PhaseBytes b;
  b.assignment_bytes = kAssignmentBytes;
  b.interpolation_bytes = peers * kIdentifierBytes;
  b.contribution_bytes = peers * kContributionBytes;
  b.total_bytes = b.assignment_bytes + b.interpolation_bytes + b.contribution_bytes;
  return b;
}

inline std::uint64_t group_overhead(std::size_t k) { return per_vehicle_overhead(k).total_bytes * k; }

/// Bytes put on the air: k transmissions of each unit; Uu relays everything
/// up and down again.
inline std::uint64_t signaling_overhead(std::size_t k, const LinkProfile& profile) {
  detail::require_k(k);
  const std::uint64_t pc5 = k * (kAssignmentBytes + kIdentifierBytes + kContributionBytes);
  return profile.interface == Interface::kPC5 ? pc5 : 2 * pc5;
}

/// PC5 charges one identifier and one contribution slot on the shared
/// channel regardless of k; Uu charges 2k of everything.
inline double transmission_latency(std::size_t k, const LinkProfile& profile) {
  detail::require_k(k);
  const std::uint64_t kk = k;
  std::uint64_t bits = 0;
  if (profile.interface == Interface::kPC5) {
    bits = kk * kAssignmentBytes * 8 + kIdentifierBytes * 8 + kContributionBytes * 8;
  } else {
    bits = 2 * kk * kAssignmentBytes * 8 + 2 * kk * kIdentifierBytes * 8 + 2 * kk * kContributionBytes * 8;
  }
  return static_cast<double>(bits) / profile.data_rate * 1000.0;
}

inline LatencyReport total_latency(std::size_t k, const LinkProfile& profile, double per_vehicle_compute_ms) {
  if (per_vehicle_compute_ms < 0 || !std::isfinite(per_vehicle_compute_ms)) {
    throw ConfigError("computation time must be a non-negative number of milliseconds");
  }
  LatencyReport r;
  r.k = k;
  r.interface = profile.interface;
  r.transmission_ms = transmission_latency(k, profile);
  r.computation_ms = per_vehicle_compute_ms;
  r.total_latency_ms = r.transmission_ms + per_vehicle_compute_ms;
  r.signaling_overhead_bytes = signaling_overhead(k, profile);
  return r;
}

// ---- published reference data ------------------------------------------------

/// One point of the published per-vehicle timing curves (milliseconds).
struct PublishedTiming {
  std::size_t k;
  double avg_comp_ms;
  double avg_auth_ms;
};

// Per-vehicle averages for the published measurement campaign. The k=10
// entries come from the comparison-table totals divided by 10; the others
// are the published per-vehicle curve points.
inline constexpr std::array<PublishedTiming, 5> kPublishedTimings{{
    {10, (131.631 - 2.2416) / 10.0, 131.631 / 10.0},
    {50, 8.32494, 8.90897},
    {100, 9.1, 10.61},
    {200, 12.2429, 14.627},
    {500, 19.8, 25.58},
}};

inline std::optional<PublishedTiming> published_timing(std::size_t k) {
  for (const auto& t : kPublishedTimings)
    if (t.k == k) return t;
  return std::nullopt;
}

struct PublishedLatency {
  std::size_t k;
  Interface interface;
  double latency_ms;
  std::uint64_t overhead_bytes;
};

inline constexpr std::array<PublishedLatency, 8> kPublishedLatencyTable{{
    {10, Interface::kPC5, 15.20, 4480},
    {10, Interface::kUu, 13.72, 8960},
    {50, Interface::kPC5, 18.46, 22400},
    {50, Interface::kUu, 11.65, 44800},
    {100, Interface::kPC5, 29.73, 44800},
    {100, Interface::kUu, 16.27, 89600},
    {500, Interface::kPC5, 122.35, 224000},
    {500, Interface::kUu, 55.64, 448000},
}};

// ---- tables ---------------------------------------------------------------------

enum class TimingSource { kPaper, kMeasured };

inline std::string_view source_name(TimingSource s) { return s == TimingSource::kPaper ? "paper" : "measured"; }

struct TableRow {
  LatencyReport report;
  TimingSource source = TimingSource::kPaper;
};

inline std::optional<double> paper_compute(std::size_t k) {
  if (auto t = published_timing(k)) return t->avg_comp_ms;
  return std::nullopt;
}

/// One row per (k, profile), sizes outermost. `compute_ms(k)` yields the
/// per-vehicle computation time; a missing one is an error.
template <class Lookup>
std::vector<TableRow> emit_table(std::span<const std::size_t> sizes, std::span<const LinkProfile> profiles,
                                 TimingSource source, Lookup&& compute_ms) {
  std::vector<TableRow> rows;
  for (std::size_t k : sizes) {
    const std::optional<double> ms = compute_ms(k);
    if (!ms) {
      throw ConfigError("no " + std::string(source_name(source)) + " computation time for k=" + std::to_string(k));
    }
    for (const auto& profile : profiles) rows.push_back({total_latency(k, profile, *ms), source});
  }
  return rows;
}

inline std::vector<TableRow> emit_paper_table(std::span<const std::size_t> sizes,
                                              std::span<const LinkProfile> profiles) {
  return emit_table(sizes, profiles, TimingSource::kPaper, paper_compute);
}

inline constexpr std::string_view kCsvHeader =
    "k,interface,transmission_ms,computation_ms,total_latency_ms,signaling_overhead_bytes";

inline std::string format_ms(double v) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(4) << v;
  return os.str();
}

inline std::string to_csv_line(const LatencyReport& r) {
  return std::to_string(r.k) + "," + std::string(interface_name(r.interface)) + "," + format_ms(r.transmission_ms) +
         "," + format_ms(r.computation_ms) + "," + format_ms(r.total_latency_ms) + "," +
         std::to_string(r.signaling_overhead_bytes);
}

inline std::string to_csv(std::span<const TableRow> rows) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const auto& row : rows) {
    out += to_csv_line(row.report);
    out += '\n';
  }
  return out;
}

}  // namespace v2xauth::analytics
