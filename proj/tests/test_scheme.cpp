#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <numeric>

#include "fixtures.hpp"
#include "v2xauth/gm_store.hpp"
#include "v2xauth/scheme.hpp"
#include "v2xauth/wire.hpp"

using namespace v2xauth;
using fixtures::toy_curve;
using fixtures::toy_point;

namespace {

constexpr const char* kSha512_09_10 =
    "5eada450defa9a9591e52ab10f10a3ef59844fcfca01d8328764e231950d5fb9"
    "71b16dd73b9c112d6155d6c2888e4044a9490671ef0fdecbae91d78f31364ee5";
// SHA-512((9,16) || bytes 0x00..0x7f)[:32], from hashlib.
constexpr const char* kKeyT5G_Seq128 = "bf804b8d2e24c9aac34c446980a021ad2a7145f5c744cc9acdd090432fc203c2";
constexpr const char* kKeyT5G_SessionA = "fa0beb668bafd947fc36000a7133a88a3970574a08d16f4ebdb8bb013c0584f5";

GroupSecret toy_secret(long a, long b) {
  return GroupSecret::from_coefficients(toy_curve(), {toy_curve().scalar(b), toy_curve().scalar(a)});
}

Bytes text(std::string_view s) { return Bytes(s.begin(), s.end()); }

Scalar sc(long v) { return toy_curve().scalar(v); }

}  // namespace

TEST_CASE("setup publishes H(f(0) G)", "[scheme]") {
  const auto secret = toy_secret(3, 5);
  const auto pub = publish(secret, text("s0"));
  CHECK(pub.commitment == hash_point(toy_point(9, 16)));
  CHECK(to_hex(pub.commitment) == kSha512_09_10);
  CHECK(pub.degree == 1);

  SECTION("seeded setup is deterministic") {
    Drbg r1(42), r2(42), r3(43);
    auto [s1, p1] = setup(fixtures::prod_curve(), r1, text("sid"));
    auto [s2, p2] = setup(fixtures::prod_curve(), r2, text("sid"));
    auto [s3, p3] = setup(fixtures::prod_curve(), r3, text("sid"));
    CHECK(p1.commitment == p2.commitment);
    CHECK(p1.commitment != p3.commitment);
    CHECK(detail::SecretAccess::coefficients(s1) == detail::SecretAccess::coefficients(s2));
  }

  SECTION("coefficients are never zero") {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      Drbg rng(seed);
      auto [s, p] = setup(toy_curve(), rng, {});
      for (const Scalar& c : detail::SecretAccess::coefficients(s)) REQUIRE_FALSE(c.is_zero());
    }
  }

  SECTION("degree-0 polynomials are rejected") {
    CHECK_THROWS_AS(GroupSecret::from_coefficients(toy_curve(), {sc(5), sc(0)}), ProtocolError);
    CHECK_THROWS_AS(GroupSecret::from_coefficients(toy_curve(), {sc(5)}), ProtocolError);
    CHECK_THROWS_AS(publish(toy_secret(3, 0), {}), ProtocolError);
  }
}

TEST_CASE("issue_credential", "[scheme]") {
  const auto secret = toy_secret(3, 5);
  const Credential c2 = issue_credential(secret, sc(2));
  CHECK(c2.share == toy_point(13, 10));
  const Credential c7 = issue_credential(secret, sc(7));
  CHECK(c7.share == toy_point(0, 6));
  CHECK_THROWS_AS(issue_credential(secret, sc(0)), ProtocolError);
  CHECK_THROWS_AS(issue_credential(secret, sc(19)), ProtocolError);
}

TEST_CASE("enroll_members draws distinct usable identifiers", "[scheme]") {
  const auto secret = toy_secret(3, 5);
  Drbg rng(7);
  const auto creds = enroll_members(secret, 17, rng);
  std::set<BigInt> ids;
  for (const auto& c : creds) {
    ids.insert(c.identifier.value());
    CHECK_FALSE(c.identifier.is_zero());
    CHECK_FALSE(c.share.is_infinity());
  }
  CHECK(ids.size() == 17);
  // f(x) = 3x + 5 vanishes at x = 11, so 17 is the toy maximum.
  CHECK_FALSE(ids.contains(BigInt(11)));
  Drbg rng2(7);
  CHECK_THROWS_AS(enroll_members(secret, 19, rng2), ProtocolError);
}

TEST_CASE("lagrange_coefficient", "[scheme]") {
  const ScalarRing& R = toy_curve().scalars();
  CHECK(lagrange_coefficient(R, sc(2), std::vector{sc(7)}) == sc(9));
  CHECK(lagrange_coefficient(R, sc(7), std::vector{sc(2)}) == sc(11));
  CHECK(lagrange_coefficient(R, sc(5), std::vector<Scalar>{}) == sc(1));
  CHECK_THROWS_AS(lagrange_coefficient(R, sc(2), std::vector{sc(7), sc(2)}), ProtocolError);
  CHECK_THROWS_AS(lagrange_coefficient(R, sc(2), std::vector{sc(21)}), ProtocolError);

  // Against the brute-force oracle for every pair and triple from 1..9.
  for (long i = 1; i <= 9; ++i)
    for (long j = 1; j <= 9; ++j)
      for (long k = j + 1; k <= 9; ++k) {
        if (i == j || i == k) continue;
        REQUIRE(lagrange_coefficient(R, sc(i), std::vector{sc(j), sc(k)}).value() ==
                toy_oracle::lagrange_at_zero(i, {j, k}));
      }
}

TEST_CASE("compute_contribution and aggregate, worked example", "[scheme]") {
  const auto secret = toy_secret(3, 5);
  const auto pub = publish(secret, text("s0"));
  const Credential c2{sc(2), toy_point(13, 10)};
  const Credential c7{sc(7), toy_point(0, 6)};
  const std::vector roster{sc(2), sc(7)};

  const Contribution k2 = compute_contribution(c2, roster);
  const Contribution k7 = compute_contribution(c7, roster);
  CHECK(k2.value == toy_point(3, 1));
  CHECK(k7.value == toy_point(5, 1));

  const Point T = aggregate(std::vector{k2, k7});
  CHECK(T == toy_point(9, 16));
  CHECK(verify(T, pub));
  CHECK_FALSE(verify(toy_point(6, 3), pub));
  CHECK_FALSE(verify(toy_curve().infinity(), pub));

  CHECK_THROWS_AS(compute_contribution(c2, std::vector{sc(2)}), ProtocolError);
  CHECK_THROWS_AS(compute_contribution(c2, std::vector{sc(3), sc(7)}), ProtocolError);
  CHECK_THROWS_AS(compute_contribution(c2, std::vector{sc(2), sc(2), sc(7)}), ProtocolError);
  CHECK_THROWS_AS(aggregate(std::vector{k2, k2}), ProtocolError);
  CHECK_THROWS_AS(aggregate(std::vector{k2}), ProtocolError);

  const Point corrupted = aggregate(std::vector{k2, Contribution{sc(7), toy_point(5, 16)}});
  CHECK(corrupted != toy_point(9, 16));
  CHECK_FALSE(verify(corrupted, pub));
}

TEST_CASE("session keys", "[scheme]") {
  const Point T = toy_point(9, 16);
  Bytes seq(128);
  std::iota(seq.begin(), seq.end(), 0);
  CHECK(derive_session_key(T, seq) == derive_session_key(T, seq));
  CHECK(to_hex(derive_session_key(T, seq)) == kKeyT5G_Seq128);
  CHECK(to_hex(derive_session_key(T, text("session-A"))) == kKeyT5G_SessionA);
  CHECK(derive_session_key(T, text("session-A")) != derive_session_key(T, text("session-B")));
  CHECK_THROWS_AS(derive_session_key(toy_curve().infinity(), seq), EncodingError);
}

TEST_CASE("pairwise_authenticate", "[scheme]") {
  const auto secret = toy_secret(3, 5);
  const auto pub = publish(secret, text("s0"));
  const auto c2 = issue_credential(secret, sc(2));
  const auto c7 = issue_credential(secret, sc(7));
  CHECK(pairwise_authenticate(c2, c7, pub));
  CHECK(pairwise_authenticate(c7, c2, pub));

  const auto foreign = issue_credential(toy_secret(4, 5), sc(2));
  CHECK_FALSE(pairwise_authenticate(foreign, c7, pub));
  CHECK_THROWS_AS(pairwise_authenticate(c2, c2, pub), ProtocolError);

  Drbg rng(1);
  auto [s2, p2] = setup(toy_curve(), rng, {}, SetupOptions{2});
  const auto members = enroll_members(s2, 2, rng);
  CHECK_THROWS_AS(pairwise_authenticate(members[0], members[1], p2), ProtocolError);
}

TEST_CASE("higher-degree polynomials interpolate with degree+1 members", "[scheme]") {
  Drbg rng(99);
  auto [secret, pub] = setup(fixtures::prod_curve(), rng, text("deg3"), SetupOptions{3});
  const auto members = enroll_members(secret, 5, rng);
  auto run = [&](std::size_t n) {
    std::vector<Scalar> roster;
    for (std::size_t i = 0; i < n; ++i) roster.push_back(members[i].identifier);
    std::vector<Contribution> cs;
    for (std::size_t i = 0; i < n; ++i) cs.push_back(compute_contribution(members[i], roster));
    return verify(aggregate(cs), pub);
  };
  CHECK_FALSE(run(3));
  CHECK(run(4));
  CHECK(run(5));
}

TEST_CASE("interpolation is exhaustive on the toy curve", "[scheme][property]") {
  // Every polynomial, every roster of size 2..6 from {1..9}.
  const auto table = toy_oracle::multiples_of_g();
  std::size_t rosters_checked = 0;
  for (long a = 1; a < 19; ++a) {
    for (long b = 0; b < 19; ++b) {
      const auto secret = toy_secret(a, b);
      std::vector<Credential> creds;
      for (long x = 1; x <= 9; ++x) creds.push_back(issue_credential(secret, sc(x)));
      for (unsigned mask = 0; mask < (1u << 9); ++mask) {
        const int n = std::popcount(mask);
        if (n < 2 || n > 6) continue;
        std::vector<Scalar> roster;
        std::vector<const Credential*> members;
        for (int i = 0; i < 9; ++i)
          if (mask & (1u << i)) {
            roster.push_back(creds[i].identifier);
            members.push_back(&creds[i]);
          }
        std::vector<Contribution> cs;
        for (auto* m : members) cs.push_back(compute_contribution(*m, roster));
        REQUIRE(fixtures::to_oracle(aggregate(cs)) == table[b]);
        ++rosters_checked;
      }
    }
  }
  CHECK(rosters_checked == 18 * 19 * 456);
}

TEST_CASE("roster order does not matter", "[scheme][property]") {
  Drbg rng(5);
  auto [secret, pub] = setup(toy_curve(), rng, {});
  const auto creds = enroll_members(secret, 5, rng);
  std::vector<Scalar> roster;
  for (const auto& c : creds) roster.push_back(c.identifier);
  std::vector<Contribution> cs;
  for (const auto& c : creds) cs.push_back(compute_contribution(c, roster));
  const Point T = aggregate(cs);
  CHECK(verify(T, pub));

  std::vector<std::size_t> perm(cs.size());
  std::iota(perm.begin(), perm.end(), 0);
  do {
    std::vector<Scalar> r2;
    std::vector<Contribution> c2;
    for (auto i : perm) r2.push_back(roster[i]);
    for (auto i : perm) c2.push_back(compute_contribution(creds[i], r2));
    REQUIRE(aggregate(c2) == T);
  } while (std::next_permutation(perm.begin(), perm.end()));
}

TEST_CASE("any subset of at least two members authenticates", "[scheme][property]") {
  Drbg rng(11);
  auto [secret, pub] = setup(toy_curve(), rng, {});
  const auto creds = enroll_members(secret, 8, rng);
  for (unsigned mask = 0; mask < (1u << 8); ++mask) {
    if (std::popcount(mask) < 2) continue;
    std::vector<Scalar> roster;
    std::vector<Credential> members;
    for (int i = 0; i < 8; ++i)
      if (mask & (1u << i)) {
        roster.push_back(creds[i].identifier);
        members.push_back(creds[i]);
      }
    std::vector<Contribution> cs;
    for (const auto& m : members) cs.push_back(compute_contribution(m, roster));
    REQUIRE(verify(aggregate(cs), pub));
  }
}

TEST_CASE("one corrupted contribution always fails", "[scheme][property]") {
  const auto secret = toy_secret(3, 5);
  const auto pub = publish(secret, {});
  for (std::vector<long> ids : {std::vector<long>{2, 7}, {1, 4, 9}, {3, 5, 6, 8}}) {
    std::vector<Scalar> roster;
    for (long x : ids) roster.push_back(sc(x));
    std::vector<Contribution> honest;
    for (long x : ids) honest.push_back(compute_contribution(issue_credential(secret, sc(x)), roster));
    for (std::size_t victim = 0; victim < honest.size(); ++victim) {
      for (auto [px, py] : toy_oracle::all_finite_points()) {
        const Point forged = toy_point(px, py);
        if (forged == honest[victim].value) continue;
        auto cs = honest;
        cs[victim].value = forged;
        REQUIRE_FALSE(verify(aggregate(cs), pub));
      }
    }
  }
}

TEST_CASE("forged share without credential fails on production curve", "[scheme][prod]") {
  Drbg rng(3);
  auto [secret, pub] = setup(fixtures::prod_curve(), rng, text("sybil"));
  auto creds = enroll_members(secret, 3, rng);
  // Fabricate (x', R) with R a random multiple of G.
  const Credential forged{fixtures::prod_curve().scalar(rng.in_range(1, fixtures::prod_curve().q() - 1)),
                          scalar_mul(rng.in_range(1, fixtures::prod_curve().q() - 1),
                                     fixtures::prod_curve().generator())};
  creds.push_back(forged);
  std::vector<Scalar> roster;
  for (const auto& c : creds) roster.push_back(c.identifier);
  std::vector<Contribution> cs;
  for (const auto& c : creds) cs.push_back(compute_contribution(c, roster));
  CHECK_FALSE(verify(aggregate(cs), pub));
  CHECK_FALSE(pairwise_authenticate(creds[0], forged, pub));
  CHECK(pairwise_authenticate(creds[0], creds[1], pub));
}

TEST_CASE("generator rotation", "[scheme][rotation]") {
  const auto secret = toy_secret(3, 5);
  const auto pub = publish(secret, text("s0"));
  const auto c2 = issue_credential(secret, sc(2));
  const auto c7 = issue_credential(secret, sc(7));

  SECTION("h = 1 is the identity") {
    const auto rotated = rotate_public(secret, pub, sc(1), pub.session_id);
    CHECK(rotated.params == pub.params);
    CHECK(rotated.commitment == pub.commitment);
    CHECK(rotate_credential(c2, sc(1)).share == c2.share);
  }

  SECTION("every h in [1, q-1]") {
    const Point old_T = toy_point(9, 16);
    for (long h = 1; h < 19; ++h) {
      const auto rotated = rotate_public(secret, pub, sc(h), text("next"));
      REQUIRE(rotated.params.generator() == scalar_mul(BigInt(h), pub.params.generator()));
      const auto r2 = rotate_credential(c2, sc(h));
      const auto r7 = rotate_credential(c7, sc(h));
      REQUIRE(pairwise_authenticate(r2, r7, rotated));
      const std::vector roster{sc(2), sc(7)};
      const Point T = aggregate(std::vector{compute_contribution(r2, roster), compute_contribution(r7, roster)});
      REQUIRE(fixtures::to_oracle(T) == toy_oracle::repeated((5 * h) % 19, toy_oracle::kG));
      REQUIRE(verify(old_T, rotated) == (h == 1));
    }
  }

  SECTION("member-side rotation from an announcement") {
    const auto ann = announce_rotation(secret, pub, text("session-7"));
    const Scalar h = rotation_scalar(ann.session_id, toy_curve().scalars());
    CHECK_FALSE(h.is_zero());
    const auto [pub_a, r2] = rotate_generator(pub, c2, ann);
    const auto [pub_b, r7] = rotate_generator(pub, c7, ann);
    CHECK(pub_a.params == pub_b.params);
    CHECK(pub_a.session_id == text("session-7"));
    CHECK(pairwise_authenticate(r2, r7, pub_a));
    CHECK(r2.share == scalar_mul(h, c2.share));
    if (!(h == sc(1))) {
      CHECK_FALSE(verify(toy_point(9, 16), pub_a));
    }
  }

  SECTION("rotation scalar is a deterministic hash of the session id") {
    const ScalarRing& R = fixtures::prod_curve().scalars();
    CHECK(rotation_scalar(text("a"), R) == rotation_scalar(text("a"), R));
    CHECK_FALSE(rotation_scalar(text("a"), R) == rotation_scalar(text("b"), R));
    CHECK(rotation_scalar(text("a"), R) == R(read_be(sha512(text("a")))));
  }
}

TEST_CASE("credential and public-params wire formats", "[scheme][wire]") {
  const auto secret = toy_secret(3, 5);
  const auto c2 = issue_credential(secret, sc(2));
  CHECK(wire::encode(c2) == Bytes{0x02, 13, 10});
  CHECK(wire::decode_credential(Bytes{0x02, 13, 10}, toy_curve()).share == c2.share);
  CHECK_THROWS_AS(wire::decode_credential(Bytes{0x00, 13, 10}, toy_curve()), EncodingError);
  CHECK_THROWS_AS(wire::decode_credential(Bytes{0x02, 13}, toy_curve()), EncodingError);
  CHECK_THROWS_AS(wire::decode_credential(Bytes{0x02, 1, 1}, toy_curve()), EncodingError);

  Drbg rng(8);
  auto [ps, pp] = setup(fixtures::prod_curve(), rng, text("prod"));
  for (const auto& c : enroll_members(ps, 4, rng)) {
    const Bytes enc = wire::encode(c);
    REQUIRE(enc.size() == 192);
    const auto back = wire::decode_credential(enc, fixtures::prod_curve());
    REQUIRE(back.identifier == c.identifier);
    REQUIRE(back.share == c.share);
  }

  const auto pub = publish(secret, text("s0"));
  const auto doc = wire::encode(pub);
  CHECK(doc.at("commitment") == kSha512_09_10);
  CHECK(doc.at("session_id") == "7330");
  const auto back = wire::decode_public(doc);
  CHECK(back.params == pub.params);
  CHECK(back.commitment == pub.commitment);
  CHECK(back.session_id == pub.session_id);
}

// The polynomial must never be reachable from a wire encoder.
template <class T>
concept WireEncodable = requires(const T& v) { wire::encode(v); };

static_assert(WireEncodable<Credential>);
static_assert(WireEncodable<Point>);
static_assert(WireEncodable<GroupPublicParams>);
static_assert(!WireEncodable<GroupSecret>);
static_assert(!std::is_constructible_v<Scalar, BigInt>);
static_assert(!std::is_convertible_v<GroupSecret, GroupPublicParams>);

TEST_CASE("group secret storage is owner-only", "[scheme][gm]") {
  const auto secret = toy_secret(3, 5);
  const auto path = std::filesystem::temp_directory_path() / "v2xauth_test_secret.json";
  gm_store::save_secret(secret, path);
  const auto perms = std::filesystem::status(path).permissions();
  CHECK((perms & std::filesystem::perms::group_all) == std::filesystem::perms::none);
  CHECK((perms & std::filesystem::perms::others_all) == std::filesystem::perms::none);
  const auto back = gm_store::load_secret(path);
  CHECK(issue_credential(back, sc(2)).share == toy_point(13, 10));
  std::filesystem::remove(path);
}
