#pragma once

// The four CLI commands as plain functions. Each returns the process exit
// code: 0 ok/authenticated, 1 failed or partitioned session, 2 usage or
// configuration error.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "v2xauth/analytics.hpp"
#include "v2xauth/gm_store.hpp"
#include "v2xauth/report.hpp"
#include "v2xauth/simulator.hpp"
#include "v2xauth/wire.hpp"

#ifndef V2XAUTH_DEFAULT_CURVE_DIR
#define V2XAUTH_DEFAULT_CURVE_DIR "config/curves"
#endif

namespace v2xauth::commands {

namespace fs = std::filesystem;

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;
inline constexpr int kExitUsage = 2;

class UsageError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

inline fs::path curve_dir(const std::string& override_dir = {}) {
  if (!override_dir.empty()) return override_dir;
  if (const char* env = std::getenv("V2XAUTH_CURVE_DIR"); env && *env) return env;
  return V2XAUTH_DEFAULT_CURVE_DIR;
}

/// A profile name looked up in the curve directory, or a path to a JSON file.
inline CurveParams resolve_curve(const std::string& name_or_path, const std::string& dir = {}) {
  if (name_or_path.empty()) throw UsageError("--curve is required");
  const fs::path p(name_or_path);
  if (p.extension() == ".json" || name_or_path.find('/') != std::string::npos) return load_curve_file(p);
  return load_curve_file(curve_dir(dir) / (name_or_path + ".json"));
}

inline std::size_t workers_from_env() {
  const char* env = std::getenv("V2XAUTH_WORKERS");
  if (!env || !*env) return 1;
  try {
    const long n = std::stol(env);
    if (n >= 1 && n <= 256) return static_cast<std::size_t>(n);
  } catch (const std::logic_error&) {
  }
  throw ConfigError(std::string("V2XAUTH_WORKERS must be an integer in [1, 256], got '") + env + "'");
}

/// Writes to `path`, or to `out` when path is empty or "-".
inline void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw ConfigError("cannot write " + path);
  f << text;
}

template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return kExitUsage;
}

// ---- setup -----------------------------------------------------------------

struct SetupArgs {
  std::string curve;
  std::string curve_dir;
  std::size_t members = 0;
  std::optional<std::uint64_t> seed;
  std::string out_dir = "group";
  bool force = false;
  unsigned degree = 1;
};

inline fs::path credential_path(const fs::path& dir, std::size_t i) {
  char name[32];
  std::snprintf(name, sizeof name, "member_%04zu.cred", i);
  return dir / "credentials" / name;
}

inline int cmd_setup(const SetupArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (args.members < 1) throw UsageError("--members must be at least 1");
    const CurveParams params = resolve_curve(args.curve, args.curve_dir);
    const fs::path dir(args.out_dir);
    const fs::path secret_path = dir / "group_secret.json";
    const fs::path public_path = dir / "group_public.json";
    const fs::path manifest_path = dir / "manifest.json";
    if (!args.force) {
      for (const auto& p : {secret_path, public_path, manifest_path, dir / "credentials"}) {
        if (fs::exists(p)) throw ConfigError(p.string() + " already exists (use --force to overwrite)");
      }
    }
    if (args.force) fs::remove_all(dir / "credentials");
    fs::create_directories(dir / "credentials");

    Drbg rng = args.seed ? Drbg(*args.seed) : Drbg::from_os_entropy();
    Bytes session_id(16);
    rng.fill(session_id);
    auto [secret, pub] = setup(params, rng, session_id, SetupOptions{args.degree});
    const auto creds = enroll_members(secret, args.members, rng);

    gm_store::save_secret(secret, secret_path);
    emit(wire::encode(pub).dump(2) + "\n", public_path.string(), out);
    report::RunManifest manifest{.command = "setup",
                                 .seed = args.seed,
                                 .outputs = {secret_path.string(), public_path.string()},
                                 .curve = params.name()};
    for (std::size_t i = 0; i < creds.size(); ++i) {
      const fs::path p = credential_path(dir, i);
      wire::write_file(p, wire::encode(creds[i]));
      manifest.outputs.push_back(p.string());
    }
    emit(report::to_json(manifest).dump(2) + "\n", manifest_path.string(), out);
    out << "wrote " << creds.size() << " credentials (" << wire::credential_size(params) << " bytes each) to "
        << (dir / "credentials").string() << "\n";
    return kExitOk;
  });
}

// ---- session ---------------------------------------------------------------

struct SessionArgs {
  std::string config;  // scenario JSON
  std::optional<std::string> curve;
  std::string curve_dir;
  std::optional<std::size_t> members;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> adversaries;
  std::optional<std::uint32_t> max_depth;
  std::optional<std::uint32_t> roster_timeout;
  bool no_recovery = false;
  std::optional<std::string> setup_dir;
  std::string out;
  bool mask_timings = false;
};

inline sim::Scenario build_scenario(const SessionArgs& args) {
  sim::Scenario s;
  if (!args.config.empty()) {
    std::ifstream in(args.config);
    if (!in) throw ConfigError("cannot open scenario " + args.config);
    nlohmann::json doc;
    try {
      in >> doc;
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("scenario " + args.config + " is not valid JSON: " + e.what());
    }
    s = sim::scenario_from_json(doc);
  }
  if (args.curve) s.curve = *args.curve;
  if (args.members) s.k = *args.members;
  if (args.seed) s.seed = *args.seed;
  if (args.adversaries) s.adversaries = sim::parse_adversary_list(*args.adversaries);
  if (args.max_depth) s.max_depth = *args.max_depth;
  if (args.roster_timeout) s.roster_timeout = *args.roster_timeout;
  if (args.no_recovery) s.recovery = false;
  if (args.setup_dir) s.setup_dir = *args.setup_dir;
  return s;
}

/// Credentials exactly as cmd_setup wrote them, in file-name order.
inline std::pair<GroupPublicParams, std::vector<Credential>> load_setup_dir(const fs::path& dir) {
  std::ifstream in(dir / "group_public.json");
  if (!in) throw ConfigError("cannot open " + (dir / "group_public.json").string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("group_public.json: ") + e.what());
  }
  GroupPublicParams pub = wire::decode_public(doc);
  std::vector<fs::path> files;
  if (fs::is_directory(dir / "credentials")) {
    for (const auto& e : fs::directory_iterator(dir / "credentials"))
      if (e.path().extension() == ".cred") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<Credential> creds;
  for (const auto& f : files) creds.push_back(wire::decode_credential(wire::read_file(f), pub.params));
  return {std::move(pub), std::move(creds)};
}

inline int cmd_session(const SessionArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    sim::Scenario s = build_scenario(args);
    std::optional<sim::SessionResult> result;
    std::string curve_name;
    if (!s.setup_dir.empty()) {
      auto [pub, creds] = load_setup_dir(s.setup_dir);
      if (s.k == 0) s.k = creds.size();
      if (s.k < 2) throw ConfigError("a session needs k >= 2, got " + std::to_string(s.k));
      if (s.k > creds.size()) {
        throw ConfigError("k=" + std::to_string(s.k) + " but only " + std::to_string(creds.size()) + " credentials");
      }
      creds.erase(creds.begin() + static_cast<std::ptrdiff_t>(s.k), creds.end());
      for (const auto& [idx, kind] : s.adversaries)
        if (idx >= s.k) throw ConfigError("adversary index " + std::to_string(idx) + " >= k");
      curve_name = pub.params.name();
      s.curve = curve_name;
      Drbg rng(s.seed);
      auto vehicles = sim::make_fleet(creds);
      for (const auto& [idx, kind] : s.adversaries)
        vehicles = sim::inject_adversary(std::move(vehicles), idx, kind, pub.params, rng);
      result = sim::run_session(vehicles, pub, sim::session_config(s, workers_from_env()));
    } else {
      if (s.k < 2) throw ConfigError("a session needs k >= 2, got " + std::to_string(s.k));
      for (const auto& [idx, kind] : s.adversaries)
        if (idx >= s.k) throw ConfigError("adversary index " + std::to_string(idx) + " >= k");
      const CurveParams params = resolve_curve(s.curve, args.curve_dir);
      curve_name = params.name();
      result = sim::run_scenario(s, params, workers_from_env());
    }
    report::RunManifest manifest{.command = "session",
                                 .config_path = args.config,
                                 .seed = s.seed,
                                 .outputs = {args.out.empty() ? "-" : args.out},
                                 .curve = curve_name};
    const nlohmann::json doc{{"manifest", report::to_json(manifest)},
                             {"scenario", sim::scenario_to_json(s)},
                             {"result", sim::to_json(*result, !args.mask_timings)}};
    emit(doc.dump(2) + "\n", args.out, out);
    return result->verdict == sim::Verdict::kAuthenticated ? kExitOk : kExitFailed;
  });
}

// ---- bench -----------------------------------------------------------------

struct BenchArgs {
  std::vector<std::size_t> sizes;
  std::size_t repetitions = 1;
  std::uint64_t seed = 1;
  std::string curve = "prod512";
  std::string curve_dir;
  std::string out;
  bool warmup = true;
};

inline int cmd_bench(const BenchArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (args.sizes.empty()) throw UsageError("--sizes needs at least one group size");
    if (args.repetitions < 1) throw UsageError("--repetitions must be at least 1");
    for (auto k : args.sizes)
      if (k < 2) throw UsageError("group sizes must be at least 2");
    const CurveParams params = resolve_curve(args.curve, args.curve_dir);
    const std::size_t workers = workers_from_env();
    if (args.warmup) (void)sim::measure_scalability(args.sizes, params, args.seed, workers);
    std::vector<std::vector<sim::ScalabilityRow>> runs;
    for (std::size_t r = 0; r < args.repetitions; ++r)
      runs.push_back(sim::measure_scalability(args.sizes, params, args.seed, workers));
    report::RunManifest manifest{.command = "bench",
                                 .seed = args.seed,
                                 .outputs = {args.out.empty() ? "-" : args.out},
                                 .curve = params.name()};
    const std::string text = report::csv_preamble(manifest, "measured") + "# repetitions=" +
                             std::to_string(args.repetitions) + " aggregate=median\n" +
                             report::bench_csv(report::median_rows(runs));
    emit(text, args.out, out);
    return kExitOk;
  });
}

// ---- analytics -------------------------------------------------------------

struct AnalyticsArgs {
  std::vector<std::size_t> sizes;  // empty: the published sizes (paper) or the bench sizes (measured)
  std::string mode = "paper";
  std::string bench;
  double pc5_rate = 10e6;
  double uu_rate = 100e6;
  std::string out;
};

inline int cmd_analytics(const AnalyticsArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const std::vector<analytics::LinkProfile> profiles{analytics::LinkProfile::pc5(args.pc5_rate),
                                                       analytics::LinkProfile::uu(args.uu_rate)};
    std::vector<analytics::TableRow> rows;
    report::RunManifest manifest{
        .command = "analytics", .config_path = args.bench, .outputs = {args.out.empty() ? "-" : args.out}};
    if (args.mode == "paper") {
      const std::vector<std::size_t> sizes = args.sizes.empty() ? std::vector<std::size_t>{10, 50, 100, 500} : args.sizes;
      rows = analytics::emit_paper_table(sizes, profiles);
      manifest.curve = "prod512";
    } else if (args.mode == "measured") {
      if (args.bench.empty()) throw ConfigError("measured mode needs --bench <bench CSV>");
      const auto bench = report::load_bench_csv(args.bench);
      std::vector<std::size_t> sizes = args.sizes;
      if (sizes.empty())
        for (const auto& r : bench) sizes.push_back(r.k);
      rows = analytics::emit_table(sizes, profiles, analytics::TimingSource::kMeasured,
                                   [&](std::size_t k) -> std::optional<double> {
                                     for (const auto& r : bench)
                                       if (r.k == k) return r.avg_comp_ms;
                                     return std::nullopt;
                                   });
    } else {
      throw UsageError("--mode must be paper or measured");
    }
    emit(report::csv_preamble(manifest, args.mode) + analytics::to_csv(rows), args.out, out);
    return kExitOk;
  });
}

}  // namespace v2xauth::commands
