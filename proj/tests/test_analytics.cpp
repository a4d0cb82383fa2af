#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "fixtures.hpp"
#include "v2xauth/analytics.hpp"
#include "v2xauth/simulator.hpp"

using namespace v2xauth;
using namespace v2xauth::analytics;

namespace {

const LinkProfile kPC5 = LinkProfile::pc5();
const LinkProfile kUu = LinkProfile::uu();

double rel_err(double got, double want) { return std::abs(got - want) / want; }

}  // namespace

TEST_CASE("per-vehicle overhead", "[analytics]") {
  const auto b = per_vehicle_overhead(10);
  CHECK(b.assignment_bytes == 256);
  CHECK(b.interpolation_bytes == 9 * 64);
  CHECK(b.contribution_bytes == 9 * 128);
  CHECK(b.total_bytes == 1984);
  CHECK(group_overhead(10) == 19840);
  CHECK(per_vehicle_overhead(1).total_bytes == 256);
  CHECK_THROWS_AS(per_vehicle_overhead(0), ConfigError);
  for (std::size_t k = 1; k < 600; ++k) {
    const auto p = per_vehicle_overhead(k);
    REQUIRE(p.total_bytes == (k - 1) * 192 + 256);
    REQUIRE(p.total_bytes == p.assignment_bytes + p.interpolation_bytes + p.contribution_bytes);
  }
}

TEST_CASE("signaling overhead matches the published table", "[analytics]") {
  CHECK(signaling_overhead(10, kPC5) == 4480);
  CHECK(signaling_overhead(10, kUu) == 8960);
  CHECK(signaling_overhead(500, kPC5) == 224000);
  for (const auto& row : kPublishedLatencyTable) {
    INFO("k=" << row.k << " " << interface_name(row.interface));
    CHECK(signaling_overhead(row.k, LinkProfile{row.interface, 1}) == row.overhead_bytes);
  }
  for (std::size_t k = 1; k < 600; ++k) REQUIRE(signaling_overhead(k, kUu) == 2 * signaling_overhead(k, kPC5));
  CHECK_THROWS_AS(signaling_overhead(0, kPC5), ConfigError);
}

TEST_CASE("transmission latency", "[analytics]") {
  CHECK(transmission_latency(10, kPC5) == Catch::Approx(2.2016).margin(1e-9));
  CHECK(transmission_latency(10, kUu) == Catch::Approx(0.7168).margin(1e-9));
  CHECK(transmission_latency(1, kPC5) == Catch::Approx(0.3584).margin(1e-9));
  CHECK(format_ms(transmission_latency(10, kPC5)) == "2.2016");
  CHECK(format_ms(transmission_latency(10, kUu)) == "0.7168");
  CHECK_THROWS_AS(transmission_latency(0, kUu), ConfigError);
  for (std::size_t k = 2; k < 600; ++k) {
    REQUIRE(transmission_latency(k, kPC5) > transmission_latency(k - 1, kPC5));
    REQUIRE(transmission_latency(k, kUu) > transmission_latency(k - 1, kUu));
  }
}

TEST_CASE("link profile validation", "[analytics]") {
  CHECK(kPC5.data_rate == 10e6);
  CHECK(kUu.data_rate == 100e6);
  CHECK_THROWS_AS(LinkProfile::pc5(0), ConfigError);
  CHECK_THROWS_AS(LinkProfile::uu(-1), ConfigError);
  CHECK(parse_interface("pc5") == Interface::kPC5);
  CHECK_THROWS_AS(parse_interface("wifi"), ConfigError);
}

TEST_CASE("total latency is additive", "[analytics]") {
  for (std::size_t k : {1u, 10u, 500u}) {
    for (const auto& p : {kPC5, kUu}) {
      const auto r = total_latency(k, p, 0);
      CHECK(r.total_latency_ms == transmission_latency(k, p));
      CHECK(r.signaling_overhead_bytes == signaling_overhead(k, p));
    }
  }
  CHECK(total_latency(10, kPC5, 13.163).total_latency_ms == Catch::Approx(15.3646));
  CHECK(rel_err(total_latency(10, kPC5, 13.163).total_latency_ms, 15.20) < 0.02);
  CHECK(rel_err(total_latency(100, kUu, 10.61).total_latency_ms, 16.27) < 0.10);
  CHECK_THROWS_AS(total_latency(10, kPC5, -1), ConfigError);
}

TEST_CASE("paper-mode table reproduces published latencies", "[analytics][table]") {
  const std::vector<std::size_t> sizes{10, 50, 100, 500};
  const std::vector<LinkProfile> profiles{kPC5, kUu};
  const auto rows = emit_paper_table(sizes, profiles);
  REQUIRE(rows.size() == 8);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& want = kPublishedLatencyTable[i];
    const auto& got = rows[i].report;
    INFO("k=" << want.k << " " << interface_name(want.interface) << " got " << got.total_latency_ms);
    CHECK(got.k == want.k);
    CHECK(got.interface == want.interface);
    CHECK(got.signaling_overhead_bytes == want.overhead_bytes);
    CHECK(rel_err(got.total_latency_ms, want.latency_ms) < 0.10);
    CHECK(rows[i].source == TimingSource::kPaper);
  }
  CHECK(emit_paper_table({}, profiles).empty());
  const std::vector<std::size_t> unknown{7};
  CHECK_THROWS_AS(emit_paper_table(unknown, profiles), ConfigError);
}

TEST_CASE("published computation averages", "[analytics]") {
  // k=10: comparison-table total minus the PC5 transmission time, per vehicle.
  CHECK(published_timing(10)->avg_comp_ms == Catch::Approx(12.93894));
  CHECK(published_timing(100)->avg_auth_ms == 10.61);
  CHECK_FALSE(published_timing(7).has_value());
}

TEST_CASE("CSV layout", "[analytics]") {
  const std::vector<std::size_t> sizes{10};
  const std::vector<LinkProfile> profiles{kPC5};
  const auto csv = to_csv(emit_paper_table(sizes, profiles));
  CHECK(csv.rfind("k,interface,transmission_ms,computation_ms,total_latency_ms,signaling_overhead_bytes\n", 0) == 0);
  CHECK(csv.find("\n10,PC5,2.2016,12.9389,15.1405,4480\n") != std::string::npos);
}

TEST_CASE("model agrees with simulator byte counts", "[analytics][sim]") {
  const auto& prod = fixtures::prod_curve();
  for (std::size_t k : {2u, 5u, 10u}) {
    Drbg rng(k);
    auto [secret, pub] = setup(prod, rng, Bytes{'m'});
    auto vehicles = sim::make_fleet(enroll_members(secret, k, rng));
    const auto r = sim::run_session(vehicles, pub, {});
    REQUIRE(r.verdict == sim::Verdict::kAuthenticated);
    const auto model = per_vehicle_overhead(k);
    for (const auto& rx : r.bytes_received) {
      CHECK(rx.assignment == model.assignment_bytes);
      CHECK(rx.roster == model.interpolation_bytes);
      CHECK(rx.contribution == model.contribution_bytes);
      CHECK(rx.total() == model.total_bytes);
    }
    CHECK(r.bytes_sent.total() == signaling_overhead(k, kPC5));
  }
}
