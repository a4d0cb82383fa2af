#pragma once

// Prime-field and short-Weierstrass curve arithmetic over GMP integers.
//
// Points are stored in affine form; scalar multiplication and multi-point
// sums run in Jacobian coordinates internally and normalize once at the end.
// Nothing here is constant time.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "v2xauth/bytes.hpp"
#include "v2xauth/errors.hpp"
#include "v2xauth/sha512.hpp"

namespace v2xauth {

template <class Tag>
class ResidueRing;

/// Integer fully reduced modulo the modulus of the ring that made it.
template <class Tag>
class Residue {
 public:
  Residue() = default;

  const BigInt& value() const noexcept { return value_; }
  bool is_zero() const { return value_ == 0; }

  friend bool operator==(const Residue& lhs, const Residue& rhs) { return lhs.value_ == rhs.value_; }

 private:
  friend class ResidueRing<Tag>;
  explicit Residue(BigInt v) : value_(std::move(v)) {}

  BigInt value_ = 0;
};

struct FieldTag {};
struct ScalarTag {};

using FieldElement = Residue<FieldTag>;
using Scalar = Residue<ScalarTag>;

/// x^{-1} mod m by extended Euclid. Throws NotInvertible for 0 or gcd != 1.
inline BigInt inv_mod(const BigInt& x, const BigInt& m) {
  if (m <= 1) throw std::invalid_argument("inv_mod: modulus must exceed 1");
  BigInt r = x % m;
  if (r < 0) r += m;
  if (r == 0) throw NotInvertible("inv_mod: zero has no inverse modulo " + m.get_str());
  BigInt g, s, t;
  mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), r.get_mpz_t(), m.get_mpz_t());
  if (g != 1) {
    throw NotInvertible("inv_mod: " + r.get_str() + " shares factor " + g.get_str() + " with modulus");
  }
  s %= m;
  if (s < 0) s += m;
  return s;
}

template <class Tag>
class ResidueRing {
 public:
  using Element = Residue<Tag>;

  explicit ResidueRing(BigInt modulus) : modulus_(std::move(modulus)) {
    if (modulus_ <= 1) throw std::invalid_argument("residue ring modulus must exceed 1");
  }

  const BigInt& modulus() const noexcept { return modulus_; }

  Element operator()(const BigInt& v) const {
    BigInt r = v % modulus_;
    if (r < 0) r += modulus_;
    return Element(std::move(r));
  }
  Element operator()(long v) const { return (*this)(BigInt(v)); }

  Element zero() const { return Element(0); }
  Element one() const { return Element(1); }

  Element add(const Element& a, const Element& b) const { return (*this)(a.value_ + b.value_); }
  Element sub(const Element& a, const Element& b) const { return (*this)(a.value_ - b.value_); }
  Element mul(const Element& a, const Element& b) const { return (*this)(a.value_ * b.value_); }
  Element neg(const Element& a) const { return (*this)(-a.value_); }
  Element inv(const Element& a) const { return Element(inv_mod(a.value_, modulus_)); }

  friend bool operator==(const ResidueRing& lhs, const ResidueRing& rhs) {
    return lhs.modulus_ == rhs.modulus_;
  }

 private:
  BigInt modulus_;
};

using PrimeField = ResidueRing<FieldTag>;
using ScalarRing = ResidueRing<ScalarTag>;

/// The group E(F_p) of y^2 = x^3 + ax + b, with its prime order q. Shared
/// immutably by every point on it.
struct CurveGroup {
  PrimeField field;
  ScalarRing scalars;
  FieldElement a;
  FieldElement b;
  std::size_t field_byte_length;

  const BigInt& p() const { return field.modulus(); }
  const BigInt& q() const { return scalars.modulus(); }

  friend bool operator==(const CurveGroup& lhs, const CurveGroup& rhs) {
    return lhs.field == rhs.field && lhs.scalars == rhs.scalars && lhs.a == rhs.a &&
           lhs.b == rhs.b && lhs.field_byte_length == rhs.field_byte_length;
  }
};

using GroupRef = std::shared_ptr<const CurveGroup>;

inline bool same_group(const GroupRef& lhs, const GroupRef& rhs) {
  return lhs == rhs || (lhs && rhs && *lhs == *rhs);
}

/// True iff y^2 = x^3 + ax + b (mod p) with 0 <= x, y < p.
inline bool is_on_curve(const BigInt& x, const BigInt& y, const CurveGroup& group) {
  const BigInt& p = group.p();
  if (x < 0 || y < 0 || x >= p || y >= p) return false;
  BigInt lhs = (y * y) % p;
  BigInt rhs = (x * x * x + group.a.value() * x + group.b.value()) % p;
  return lhs == rhs;
}

/// Affine point or the point at infinity. Every finite Point satisfies its
/// curve equation; construction enforces it.
class Point {
 public:
  static Point infinity(GroupRef group) { return Point(std::move(group)); }

  static Point affine(GroupRef group, const BigInt& x, const BigInt& y) {
    if (!group) throw std::invalid_argument("point requires a curve group");
    if (x < 0 || y < 0 || x >= group->p() || y >= group->p()) {
      throw EncodingError(EncodingError::Kind::kCoordinateOutOfRange, "coordinate not reduced mod p");
    }
    if (!is_on_curve(x, y, *group)) {
      throw EncodingError(EncodingError::Kind::kNotOnCurve,
                          "(" + x.get_str() + ", " + y.get_str() + ") is not on the curve");
    }
    return Point(group, group->field(x), group->field(y));
  }

  bool is_infinity() const noexcept { return infinity_; }
  const GroupRef& group() const noexcept { return group_; }

  const FieldElement& x() const {
    require_finite();
    return x_;
  }
  const FieldElement& y() const {
    require_finite();
    return y_;
  }

  friend bool operator==(const Point& lhs, const Point& rhs) {
    if (!same_group(lhs.group_, rhs.group_)) return false;
    if (lhs.infinity_ || rhs.infinity_) return lhs.infinity_ == rhs.infinity_;
    return lhs.x_ == rhs.x_ && lhs.y_ == rhs.y_;
  }

 private:
  explicit Point(GroupRef group) : group_(std::move(group)), infinity_(true) {}
  Point(GroupRef group, FieldElement x, FieldElement y)
      : group_(std::move(group)), x_(std::move(x)), y_(std::move(y)), infinity_(false) {}

  void require_finite() const {
    if (infinity_) throw EncodingError(EncodingError::Kind::kInfinity, "point at infinity has no coordinates");
  }

  GroupRef group_;
  FieldElement x_;
  FieldElement y_;
  bool infinity_ = true;
};

inline bool is_on_curve(const Point& pt, const CurveGroup& group) {
  if (!pt.group() || !(*pt.group() == group)) return false;
  if (pt.is_infinity()) return true;
  return is_on_curve(pt.x().value(), pt.y().value(), group);
}

namespace detail {

// Jacobian (X : Y : Z) with x = X/Z^2, y = Y/Z^3; Z == 0 encodes infinity.
struct Jacobian {
  BigInt X = 0;
  BigInt Y = 1;
  BigInt Z = 0;

  bool is_infinity() const { return Z == 0; }
};

inline void reduce(BigInt& v, const BigInt& p) {
  mpz_mod(v.get_mpz_t(), v.get_mpz_t(), p.get_mpz_t());
}

inline Jacobian to_jacobian(const Point& pt) {
  if (pt.is_infinity()) return {};
  return {pt.x().value(), pt.y().value(), 1};
}

inline Jacobian dbl(const Jacobian& P, const CurveGroup& g) {
  if (P.is_infinity() || P.Y == 0) return {};
  const BigInt& p = g.p();
  BigInt XX = P.X * P.X;
  reduce(XX, p);
  BigInt YY = P.Y * P.Y;
  reduce(YY, p);
  BigInt YYYY = YY * YY;
  reduce(YYYY, p);
  BigInt ZZ = P.Z * P.Z;
  reduce(ZZ, p);
  BigInt S = 4 * P.X * YY;
  reduce(S, p);
  BigInt M = ZZ * ZZ;
  reduce(M, p);
  M = 3 * XX + g.a.value() * M;
  reduce(M, p);
  Jacobian R;
  R.X = M * M - 2 * S;
  reduce(R.X, p);
  R.Y = M * (S - R.X) - 8 * YYYY;
  reduce(R.Y, p);
  R.Z = 2 * P.Y * P.Z;
  reduce(R.Z, p);
  return R;
}

// P + (x2, y2) with the second operand affine and finite.
inline Jacobian add_mixed(const Jacobian& P, const BigInt& x2, const BigInt& y2, const CurveGroup& g) {
  if (P.is_infinity()) return {x2, y2, 1};
  const BigInt& p = g.p();
  BigInt Z1Z1 = P.Z * P.Z;
  reduce(Z1Z1, p);
  BigInt U2 = x2 * Z1Z1;
  reduce(U2, p);
  BigInt S2 = y2 * P.Z;
  reduce(S2, p);
  S2 *= Z1Z1;
  reduce(S2, p);
  BigInt H = U2 - P.X;
  reduce(H, p);
  BigInt r = S2 - P.Y;
  reduce(r, p);
  if (H == 0) {
    if (r == 0) return dbl(P, g);
    return {};
  }
  BigInt HH = H * H;
  reduce(HH, p);
  BigInt HHH = H * HH;
  reduce(HHH, p);
  BigInt V = P.X * HH;
  reduce(V, p);
  Jacobian R;
  R.X = r * r - HHH - 2 * V;
  reduce(R.X, p);
  R.Y = r * (V - R.X) - P.Y * HHH;
  reduce(R.Y, p);
  R.Z = P.Z * H;
  reduce(R.Z, p);
  return R;
}

inline Point to_affine(const Jacobian& P, const GroupRef& group) {
  if (P.is_infinity()) return Point::infinity(group);
  const BigInt& p = group->p();
  BigInt zinv = inv_mod(P.Z, p);
  BigInt zinv2 = zinv * zinv;
  reduce(zinv2, p);
  BigInt x = P.X * zinv2;
  reduce(x, p);
  BigInt y = P.Y * zinv2;
  reduce(y, p);
  y *= zinv;
  reduce(y, p);
  return Point::affine(group, x, y);
}

inline void require_same_group(const Point& lhs, const Point& rhs) {
  if (!same_group(lhs.group(), rhs.group())) throw CurveMismatch();
}

}  // namespace detail

inline Point point_add(const Point& lhs, const Point& rhs) {
  detail::require_same_group(lhs, rhs);
  if (lhs.is_infinity()) return rhs;
  if (rhs.is_infinity()) return lhs;
  const CurveGroup& g = *lhs.group();
  const PrimeField& F = g.field;
  if (lhs.x() == rhs.x()) {
    if (F.add(lhs.y(), rhs.y()).is_zero()) return Point::infinity(lhs.group());
    // Doubling: slope (3x^2 + a) / 2y.
    const FieldElement three_x2 = F.mul(F(3), F.mul(lhs.x(), lhs.x()));
    const FieldElement slope = F.mul(F.add(three_x2, g.a), F.inv(F.add(lhs.y(), lhs.y())));
    const FieldElement x3 = F.sub(F.mul(slope, slope), F.add(lhs.x(), lhs.x()));
    const FieldElement y3 = F.sub(F.mul(slope, F.sub(lhs.x(), x3)), lhs.y());
    return Point::affine(lhs.group(), x3.value(), y3.value());
  }
  const FieldElement slope = F.mul(F.sub(rhs.y(), lhs.y()), F.inv(F.sub(rhs.x(), lhs.x())));
  const FieldElement x3 = F.sub(F.sub(F.mul(slope, slope), lhs.x()), rhs.x());
  const FieldElement y3 = F.sub(F.mul(slope, F.sub(lhs.x(), x3)), lhs.y());
  return Point::affine(lhs.group(), x3.value(), y3.value());
}

inline Point point_neg(const Point& pt) {
  if (pt.is_infinity()) return pt;
  const PrimeField& F = pt.group()->field;
  return Point::affine(pt.group(), pt.x().value(), F.neg(pt.y()).value());
}

inline Point scalar_mul(const Scalar& k, const Point& pt) {
  if (pt.is_infinity() || k.is_zero()) return Point::infinity(pt.group());
  const CurveGroup& g = *pt.group();
  const BigInt& x = pt.x().value();
  const BigInt& y = pt.y().value();
  const mpz_srcptr bits = k.value().get_mpz_t();
  detail::Jacobian acc;
  for (std::size_t i = mpz_sizeinbase(bits, 2); i-- > 0;) {
    acc = detail::dbl(acc, g);
    if (mpz_tstbit(bits, i)) acc = detail::add_mixed(acc, x, y, g);
  }
  return detail::to_affine(acc, pt.group());
}

/// Integer multiplier, reduced mod q first (valid because every point has
/// order q; CurveParams enforces cofactor 1).
inline Point scalar_mul(const BigInt& k, const Point& pt) {
  if (!pt.group()) throw std::invalid_argument("scalar_mul on a group-less point");
  return scalar_mul(pt.group()->scalars(k), pt);
}

/// Sum of many points with a single normalization.
inline Point point_sum(std::span<const Point> points, const GroupRef& group) {
  detail::Jacobian acc;
  for (const Point& pt : points) {
    if (!same_group(pt.group(), group)) throw CurveMismatch();
    if (pt.is_infinity()) continue;
    acc = detail::add_mixed(acc, pt.x().value(), pt.y().value(), *group);
  }
  return detail::to_affine(acc, group);
}

inline Point operator+(const Point& lhs, const Point& rhs) { return point_add(lhs, rhs); }
inline Point operator-(const Point& pt) { return point_neg(pt); }
inline Point operator*(const Scalar& k, const Point& pt) { return scalar_mul(k, pt); }

/// Curve, generator and group order. Immutable after construction; copies
/// share the underlying group.
class CurveParams {
 public:
  static constexpr int kPrimalityReps = 32;

  static CurveParams create(std::string name, const BigInt& p, const BigInt& a, const BigInt& b,
                            const BigInt& gx, const BigInt& gy, const BigInt& q,
                            std::size_t field_byte_length) {
    if (p <= 3 || mpz_probab_prime_p(p.get_mpz_t(), kPrimalityReps) == 0) {
      throw InvalidCurve("field modulus p is not prime");
    }
    if (q <= 3 || mpz_probab_prime_p(q.get_mpz_t(), kPrimalityReps) == 0) {
      throw InvalidCurve("group order q is not prime");
    }
    if (a < 0 || a >= p || b < 0 || b >= p) throw InvalidCurve("curve coefficients must be reduced mod p");
    const BigInt disc = (4 * a * a * a + 27 * b * b) % p;
    if (disc == 0) throw InvalidCurve("curve is singular (4a^3 + 27b^2 = 0 mod p)");
    const std::size_t p_bytes = (mpz_sizeinbase(p.get_mpz_t(), 2) + 7) / 8;
    if (field_byte_length < p_bytes) {
      throw InvalidCurve("field_byte_length " + std::to_string(field_byte_length) + " cannot hold p");
    }
    // Hasse: #E <= p + 1 + 2 sqrt(p). q above half of that forces cofactor 1.
    BigInt root;
    mpz_sqrt(root.get_mpz_t(), p.get_mpz_t());
    if (2 * q <= p + 1 + 2 * (root + 1)) {
      throw InvalidCurve("group order q too small for cofactor 1");
    }

    auto group = std::make_shared<const CurveGroup>(
        CurveGroup{PrimeField(p), ScalarRing(q), PrimeField(p)(a), PrimeField(p)(b), field_byte_length});
    if (!is_on_curve(gx, gy, *group)) throw InvalidCurve("generator is not on the curve");
    Point g = Point::affine(group, gx, gy);
    if (!scalar_mul_unreduced(q, g).is_infinity()) throw InvalidCurve("q * G is not the point at infinity");
    return CurveParams(std::move(name), std::move(group), std::move(g));
  }

  /// Same group, different base point (generator rotation). The group was
  /// validated already; with cofactor 1 every finite point generates it.
  CurveParams with_generator(const Point& generator) const {
    if (!same_group(generator.group(), group_)) throw CurveMismatch();
    if (generator.is_infinity()) throw InvalidCurve("generator cannot be the point at infinity");
    return CurveParams(name_, group_, generator);
  }

  const std::string& name() const noexcept { return name_; }
  const GroupRef& group() const noexcept { return group_; }
  const Point& generator() const noexcept { return generator_; }
  const BigInt& p() const { return group_->p(); }
  const BigInt& q() const { return group_->q(); }
  const FieldElement& a() const { return group_->a; }
  const FieldElement& b() const { return group_->b; }
  const PrimeField& field() const { return group_->field; }
  const ScalarRing& scalars() const { return group_->scalars; }
  std::size_t field_byte_length() const { return group_->field_byte_length; }

  Point infinity() const { return Point::infinity(group_); }
  Point point(const BigInt& x, const BigInt& y) const { return Point::affine(group_, x, y); }
  Scalar scalar(const BigInt& v) const { return group_->scalars(v); }
  Scalar scalar(long v) const { return group_->scalars(v); }

  friend bool operator==(const CurveParams& lhs, const CurveParams& rhs) {
    return same_group(lhs.group_, rhs.group_) && lhs.generator_ == rhs.generator_;
  }

 private:
  CurveParams(std::string name, GroupRef group, Point generator)
      : name_(std::move(name)), group_(std::move(group)), generator_(std::move(generator)) {}

  // Validation needs q*G without reducing q mod q.
  static Point scalar_mul_unreduced(const BigInt& k, const Point& pt) {
    const CurveGroup& g = *pt.group();
    detail::Jacobian acc;
    for (std::size_t i = mpz_sizeinbase(k.get_mpz_t(), 2); i-- > 0;) {
      acc = detail::dbl(acc, g);
      if (mpz_tstbit(k.get_mpz_t(), i)) acc = detail::add_mixed(acc, pt.x().value(), pt.y().value(), g);
    }
    return detail::to_affine(acc, pt.group());
  }

  std::string name_;
  GroupRef group_;
  Point generator_;
};

inline bool is_on_curve(const Point& pt, const CurveParams& params) { return is_on_curve(pt, *params.group()); }

// ---- wire encoding ----------------------------------------------------------

/// x || y, each big-endian in exactly field_byte_length bytes.
inline Bytes serialize_point(const Point& pt) {
  if (pt.is_infinity()) {
    throw EncodingError(EncodingError::Kind::kInfinity, "point at infinity is not wire-encodable");
  }
  const std::size_t width = pt.group()->field_byte_length;
  Bytes out;
  out.reserve(2 * width);
  append_be(pt.x().value(), width, out);
  append_be(pt.y().value(), width, out);
  return out;
}

inline Point deserialize_point(std::span<const std::uint8_t> data, const GroupRef& group) {
  const std::size_t width = group->field_byte_length;
  if (data.size() != 2 * width) {
    throw EncodingError(EncodingError::Kind::kBadLength,
                        "point encoding must be " + std::to_string(2 * width) + " bytes, got " +
                            std::to_string(data.size()));
  }
  return Point::affine(group, read_be(data.first(width)), read_be(data.subspan(width)));
}

inline Point deserialize_point(std::span<const std::uint8_t> data, const CurveParams& params) {
  return deserialize_point(data, params.group());
}

inline Digest hash_point(const Point& pt) { return sha512(serialize_point(pt)); }

// ---- JSON profile -----------------------------------------------------------

inline CurveParams curve_from_json(const nlohmann::json& doc) {
  auto field = [&](const char* key) -> std::string {
    if (!doc.contains(key)) throw ConfigError(std::string("curve JSON missing field '") + key + "'");
    const auto& v = doc.at(key);
    if (!v.is_string()) throw ConfigError(std::string("curve JSON field '") + key + "' must be a decimal string");
    return v.get<std::string>();
  };
  try {
    const BigInt width = parse_decimal(field("field_byte_length"));
    if (width <= 0 || width > 4096) throw ConfigError("field_byte_length out of range");
    return CurveParams::create(doc.value("name", std::string("custom")), parse_decimal(field("p")),
                               parse_decimal(field("a")), parse_decimal(field("b")),
                               parse_decimal(field("gx")), parse_decimal(field("gy")),
                               parse_decimal(field("q")), width.get_ui());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("curve JSON: ") + e.what());
  }
}

inline nlohmann::json curve_to_json(const CurveParams& params) {
  return {{"name", params.name()},
          {"p", params.p().get_str()},
          {"a", params.a().value().get_str()},
          {"b", params.b().value().get_str()},
          {"gx", params.generator().x().value().get_str()},
          {"gy", params.generator().y().value().get_str()},
          {"q", params.q().get_str()},
          {"field_byte_length", std::to_string(params.field_byte_length())}};
}

inline CurveParams load_curve_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open curve file " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("invalid curve JSON in " + path.string() + ": " + e.what());
  }
  return curve_from_json(doc);
}

}  // namespace v2xauth
