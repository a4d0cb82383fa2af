// v2xauth: key ceremonies, simulated sessions, scalability sweeps and
// latency tables.

#include <iostream>

#include <CLI11.hpp>

#include "v2xauth/commands.hpp"

namespace cmd = v2xauth::commands;

int main(int argc, char** argv) {
  CLI::App app{"Group authentication by elliptic-curve Lagrange interpolation"};
  app.set_version_flag("--version", std::string(v2xauth::report::kToolVersion));
  app.require_subcommand(1);

  cmd::SetupArgs setup_args;
  std::uint64_t setup_seed = 0;
  auto* setup = app.add_subcommand("setup", "generate a group secret, public parameters and member credentials");
  setup->add_option("--curve", setup_args.curve, "curve profile name or JSON path")->required();
  setup->add_option("--curve-dir", setup_args.curve_dir, "directory holding <name>.json curve profiles");
  setup->add_option("--members", setup_args.members, "number of credentials to issue")->required();
  auto* setup_seed_opt = setup->add_option("--seed", setup_seed, "deterministic seed (default: OS entropy)");
  setup->add_option("--out", setup_args.out_dir, "output directory")->capture_default_str();
  setup->add_option("--degree", setup_args.degree, "polynomial degree")->capture_default_str();
  setup->add_flag("--force", setup_args.force, "overwrite existing output");

  cmd::SessionArgs session_args;
  std::string s_curve, s_adv, s_setup;
  std::size_t s_members = 0;
  std::uint64_t s_seed = 0;
  std::uint32_t s_depth = 0, s_timeout = 0;
  auto* session = app.add_subcommand("session", "run one simulated authentication session");
  session->add_option("--config", session_args.config, "scenario JSON");
  auto* o_curve = session->add_option("--curve", s_curve, "curve profile name or JSON path");
  session->add_option("--curve-dir", session_args.curve_dir, "directory holding curve profiles");
  auto* o_members = session->add_option("--members,-k", s_members, "group size k");
  auto* o_seed = session->add_option("--seed", s_seed, "scenario seed");
  auto* o_adv = session->add_option("--adversaries", s_adv, "idx:kind,... with kind honest|corrupt|sybil|silent");
  auto* o_depth = session->add_option("--max-depth", s_depth, "bisection depth limit");
  auto* o_timeout = session->add_option("--roster-timeout", s_timeout, "roster wait in logical ticks");
  auto* o_setup = session->add_option("--setup", s_setup, "use credentials from a setup output directory");
  session->add_flag("--no-recovery", session_args.no_recovery, "skip subgroup recovery after a failure");
  session->add_flag("--mask-timings", session_args.mask_timings, "omit wall-clock fields from the JSON");
  session->add_option("--out", session_args.out, "write JSON here instead of stdout");

  cmd::BenchArgs bench_args;
  bool no_warmup = false;
  auto* bench = app.add_subcommand("bench", "time honest sessions over a list of group sizes");
  bench->add_option("--sizes", bench_args.sizes, "comma-separated group sizes")->delimiter(',');
  bench->add_option("--repetitions", bench_args.repetitions, "timed sweeps; medians are reported")
      ->capture_default_str();
  bench->add_option("--seed", bench_args.seed)->capture_default_str();
  bench->add_option("--curve", bench_args.curve)->capture_default_str();
  bench->add_option("--curve-dir", bench_args.curve_dir);
  bench->add_flag("--no-warmup", no_warmup, "skip the discarded warm-up sweep");
  bench->add_option("--out", bench_args.out, "write CSV here instead of stdout");

  cmd::AnalyticsArgs an_args;
  auto* analytics = app.add_subcommand("analytics", "PC5/Uu latency and signaling overhead table");
  analytics->add_option("--sizes", an_args.sizes, "comma-separated group sizes")->delimiter(',');
  analytics->add_option("--mode", an_args.mode, "paper or measured")
      ->check(CLI::IsMember({"paper", "measured"}))
      ->capture_default_str();
  analytics->add_option("--bench", an_args.bench, "bench CSV (measured mode)");
  analytics->add_option("--pc5-rate", an_args.pc5_rate, "PC5 data rate, bit/s")->capture_default_str();
  analytics->add_option("--uu-rate", an_args.uu_rate, "Uu data rate, bit/s")->capture_default_str();
  analytics->add_option("--out", an_args.out, "write CSV here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return cmd::kExitUsage;
  }

  if (setup->parsed()) {
    if (setup_seed_opt->count()) setup_args.seed = setup_seed;
    return cmd::cmd_setup(setup_args, std::cout, std::cerr);
  }
  if (session->parsed()) {
    if (o_curve->count()) session_args.curve = s_curve;
    if (o_members->count()) session_args.members = s_members;
    if (o_seed->count()) session_args.seed = s_seed;
    if (o_adv->count()) session_args.adversaries = s_adv;
    if (o_depth->count()) session_args.max_depth = s_depth;
    if (o_timeout->count()) session_args.roster_timeout = s_timeout;
    if (o_setup->count()) session_args.setup_dir = s_setup;
    return cmd::cmd_session(session_args, std::cout, std::cerr);
  }
  if (bench->parsed()) {
    bench_args.warmup = !no_warmup;
    return cmd::cmd_bench(bench_args, std::cout, std::cerr);
  }
  return cmd::cmd_analytics(an_args, std::cout, std::cerr);
}
