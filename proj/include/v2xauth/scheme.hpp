#pragma once

// Group authentication by Lagrange interpolation in the exponent.
//
// The group manager holds f(x) = a x + b over Z_q and hands member i the pair
// (x_i, f(x_i) G). Any k >= 2 members recover f(0) G by summing their
// Lagrange-weighted shares and check it against the published H(f(0) G).

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "v2xauth/curve.hpp"
#include "v2xauth/drbg.hpp"

namespace v2xauth {

struct Credential {
  Scalar identifier;
  Point share;
};

struct Contribution {
  Scalar identifier;
  Point value;
};

struct GroupPublicParams {
  CurveParams params;
  Digest commitment{};
  Bytes session_id;
  unsigned degree = 1;
};

namespace detail {
struct SecretAccess;
}

/// The group manager's polynomial. Coefficients never leave this type except
/// through the GM-side storage in gm_store.hpp.
class GroupSecret {
 public:
  /// Coefficients lowest degree first: {b, a} for f(x) = a x + b.
  static GroupSecret from_coefficients(CurveParams params, std::vector<Scalar> coefficients) {
    if (coefficients.size() < 2) throw ProtocolError("group polynomial must have degree >= 1");
    if (coefficients.back().is_zero()) throw ProtocolError("leading coefficient must be nonzero");
    return GroupSecret(std::move(params), std::move(coefficients));
  }

  const CurveParams& params() const noexcept { return params_; }
  unsigned degree() const noexcept { return static_cast<unsigned>(coefficients_.size() - 1); }

 private:
  friend struct detail::SecretAccess;

  GroupSecret(CurveParams params, std::vector<Scalar> coefficients)
      : params_(std::move(params)), coefficients_(std::move(coefficients)) {}

  CurveParams params_;
  std::vector<Scalar> coefficients_;
};

namespace detail {

struct SecretAccess {
  static const std::vector<Scalar>& coefficients(const GroupSecret& s) { return s.coefficients_; }

  static Scalar evaluate(const GroupSecret& s, const Scalar& x) {
    const ScalarRing& R = s.params_.scalars();
    Scalar acc = R.zero();
    for (auto it = s.coefficients_.rbegin(); it != s.coefficients_.rend(); ++it) {
      acc = R.add(R.mul(acc, x), *it);
    }
    return acc;
  }

  static Point group_value(const GroupSecret& s) {
    return scalar_mul(s.coefficients_.front(), s.params_.generator());
  }
};

inline std::string describe(const Scalar& s) { return s.value().get_str(); }

}  // namespace detail

struct SetupOptions {
  unsigned degree = 1;
};

/// Publishes H(f(0) G). Throws when f(0) G is the point at infinity.
inline GroupPublicParams publish(const GroupSecret& secret, Bytes session_id) {
  const Point group_value = detail::SecretAccess::group_value(secret);
  if (group_value.is_infinity()) throw ProtocolError("f(0) G is the point at infinity; redraw b");
  return GroupPublicParams{secret.params(), hash_point(group_value), std::move(session_id), secret.degree()};
}

/// Draws every coefficient uniformly from [1, q-1].
inline std::pair<GroupSecret, GroupPublicParams> setup(const CurveParams& params, Drbg& rng, Bytes session_id,
                                                       SetupOptions options = {}) {
  if (options.degree < 1) throw ProtocolError("polynomial degree must be at least 1");
  std::vector<Scalar> coefficients;
  const BigInt upper = params.q() - 1;
  for (unsigned i = 0; i <= options.degree; ++i) {
    coefficients.push_back(params.scalar(rng.in_range(1, upper)));
  }
  auto secret = GroupSecret::from_coefficients(params, std::move(coefficients));
  auto pub = publish(secret, std::move(session_id));
  return {std::move(secret), std::move(pub)};
}

inline Credential issue_credential(const GroupSecret& secret, const Scalar& identifier) {
  if (identifier.is_zero()) throw ProtocolError("identifier 0 would reveal f(0) G");
  const Scalar fx = detail::SecretAccess::evaluate(secret, identifier);
  return Credential{identifier, scalar_mul(fx, secret.params().generator())};
}

/// Issues `count` credentials with fresh identifiers drawn uniformly from
/// [1, q-1], redrawing on collision with `taken` or on f(x_i) = 0.
inline std::vector<Credential> enroll_members(const GroupSecret& secret, std::size_t count, Drbg& rng,
                                              std::set<BigInt> taken = {}) {
  const CurveParams& params = secret.params();
  const BigInt upper = params.q() - 1;
  if (BigInt(static_cast<unsigned long>(count + taken.size())) > upper) {
    throw ProtocolError("curve order too small for " + std::to_string(count) + " members");
  }
  std::vector<Credential> out;
  out.reserve(count);
  std::size_t attempts = 0;
  while (out.size() < count) {
    if (++attempts > 64 * (count + 16)) throw ProtocolError("identifier space exhausted");
    const Scalar x = params.scalar(rng.in_range(1, upper));
    if (taken.contains(x.value())) continue;
    Credential cred = issue_credential(secret, x);
    if (cred.share.is_infinity()) continue;
    taken.insert(x.value());
    out.push_back(std::move(cred));
  }
  return out;
}

/// prod_j (-x_j) / (x_i - x_j) mod q, with one inversion.
inline Scalar lagrange_coefficient(const ScalarRing& ring, const Scalar& xi, std::span<const Scalar> others) {
  Scalar num = ring.one();
  Scalar den = ring.one();
  for (const Scalar& xj : others) {
    const Scalar diff = ring.sub(xi, xj);
    if (diff.is_zero()) {
      throw ProtocolError("duplicate identifiers in roster: " + detail::describe(xi) + " and " +
                          detail::describe(xj));
    }
    num = ring.mul(num, ring.neg(xj));
    den = ring.mul(den, diff);
  }
  return ring.mul(num, ring.inv(den));
}

/// C_i = lambda_i * Y_i over the full roster (which must contain x_i once).
inline Contribution compute_contribution(const Credential& cred, std::span<const Scalar> roster) {
  if (roster.size() < 2) throw ProtocolError("roster needs at least two members");
  const ScalarRing& ring = cred.share.group()->scalars;
  std::vector<Scalar> others;
  others.reserve(roster.size() - 1);
  std::size_t self_count = 0;
  for (const Scalar& x : roster) {
    if (x == cred.identifier) {
      ++self_count;
    } else {
      others.push_back(x);
    }
  }
  if (self_count == 0) throw ProtocolError("identifier " + detail::describe(cred.identifier) + " not in roster");
  if (self_count > 1) throw ProtocolError("identifier " + detail::describe(cred.identifier) + " appears twice");
  const Scalar lambda = lagrange_coefficient(ring, cred.identifier, others);
  return Contribution{cred.identifier, scalar_mul(lambda, cred.share)};
}

/// T = sum of all contributions.
inline Point aggregate(std::span<const Contribution> contributions) {
  if (contributions.size() < 2) throw ProtocolError("aggregation needs at least two contributions");
  std::set<BigInt> seen;
  std::vector<Point> points;
  points.reserve(contributions.size());
  for (const Contribution& c : contributions) {
    if (!seen.insert(c.identifier.value()).second) {
      throw ProtocolError("duplicate sender identifier " + detail::describe(c.identifier));
    }
    points.push_back(c.value);
  }
  return point_sum(points, contributions.front().value.group());
}

/// H(T) == commitment. The point at infinity fails rather than throws.
inline bool verify(const Point& aggregate_point, const GroupPublicParams& pub) {
  if (aggregate_point.is_infinity()) return false;
  if (!same_group(aggregate_point.group(), pub.params.group())) return false;
  return hash_point(aggregate_point) == pub.commitment;
}

inline constexpr std::size_t kSessionKeyLength = 32;
using SessionKey = std::array<std::uint8_t, kSessionKeyLength>;

/// First 32 bytes of SHA-512(serialize(T) || session_id).
inline SessionKey derive_session_key(const Point& aggregate_point, std::span<const std::uint8_t> session_id) {
  const Digest d = Sha512{}.update(serialize_point(aggregate_point)).update(session_id).finish();
  SessionKey key{};
  std::copy_n(d.begin(), key.size(), key.begin());
  return key;
}

/// Two-member run of contribution, aggregation and verification.
inline bool pairwise_authenticate(const Credential& a, const Credential& b, const GroupPublicParams& pub) {
  if (pub.degree > 1) throw ProtocolError("pairwise authentication needs a degree-1 polynomial");
  if (a.identifier == b.identifier) throw ProtocolError("pairwise authentication with identical identifiers");
  const std::array<Scalar, 2> roster{a.identifier, b.identifier};
  const std::array<Contribution, 2> contributions{compute_contribution(a, roster), compute_contribution(b, roster)};
  return verify(aggregate(contributions), pub);
}

// ---- generator rotation ------------------------------------------------------

/// h = SHA-512(session_id) mod q; on h = 0 retry with a counter byte appended.
inline Scalar rotation_scalar(std::span<const std::uint8_t> session_id, const ScalarRing& ring) {
  Scalar h = ring(read_be(sha512(session_id)));
  for (unsigned ctr = 0; h.is_zero(); ++ctr) {
    if (ctr > 255) throw ProtocolError("rotation scalar stuck at zero");
    const std::uint8_t suffix = static_cast<std::uint8_t>(ctr);
    h = ring(read_be(Sha512{}.update(session_id).update({&suffix, 1}).finish()));
  }
  return h;
}

/// Member side: Y_i' = h Y_i, no round-trip to the group manager.
inline Credential rotate_credential(const Credential& cred, const Scalar& h) {
  if (h.is_zero()) throw ProtocolError("rotation scalar must be nonzero");
  return Credential{cred.identifier, scalar_mul(h, cred.share)};
}

/// GM side: G' = h G and commitment' = H(h f(0) G).
inline GroupPublicParams rotate_public(const GroupSecret& secret, const GroupPublicParams& pub, const Scalar& h,
                                       Bytes new_session_id) {
  if (h.is_zero()) throw ProtocolError("rotation scalar must be nonzero");
  const Point rotated_value = scalar_mul(h, detail::SecretAccess::group_value(secret));
  return GroupPublicParams{pub.params.with_generator(scalar_mul(h, pub.params.generator())),
                           hash_point(rotated_value), std::move(new_session_id), pub.degree};
}

struct RotationAnnouncement {
  Bytes session_id;
  Digest commitment{};
};

/// What the group manager broadcasts when a new session starts.
inline RotationAnnouncement announce_rotation(const GroupSecret& secret, const GroupPublicParams& pub,
                                              Bytes new_session_id) {
  const Scalar h = rotation_scalar(new_session_id, pub.params.scalars());
  auto rotated = rotate_public(secret, pub, h, new_session_id);
  return RotationAnnouncement{std::move(new_session_id), rotated.commitment};
}

/// Member side of a rotation: derives h from the announced session id and
/// rotates both the generator and the local share.
inline std::pair<GroupPublicParams, Credential> rotate_generator(const GroupPublicParams& pub, const Credential& cred,
                                                                 const RotationAnnouncement& announcement) {
  const Scalar h = rotation_scalar(announcement.session_id, pub.params.scalars());
  GroupPublicParams rotated{pub.params.with_generator(scalar_mul(h, pub.params.generator())),
                            announcement.commitment, announcement.session_id, pub.degree};
  return {std::move(rotated), rotate_credential(cred, h)};
}

}  // namespace v2xauth
