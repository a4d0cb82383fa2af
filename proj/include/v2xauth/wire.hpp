#pragma once

// Bit-exact encodings for everything that crosses a vehicle boundary.
// GroupSecret has no encoder here on purpose; see gm_store.hpp.

#include <filesystem>
#include <fstream>
#include <iterator>
#include <span>
#include <string>

#include <json.hpp>

#include "v2xauth/curve.hpp"
#include "v2xauth/scheme.hpp"

namespace v2xauth::wire {

/// Identifier: field_byte_length big-endian bytes.
inline Bytes encode(const Scalar& identifier, const CurveGroup& group) {
  Bytes out;
  append_be(identifier.value(), group.field_byte_length, out);
  return out;
}

inline Scalar decode_identifier(std::span<const std::uint8_t> data, const CurveGroup& group) {
  if (data.size() != group.field_byte_length) {
    throw EncodingError(EncodingError::Kind::kBadLength, "identifier must be " +
                                                             std::to_string(group.field_byte_length) + " bytes");
  }
  BigInt v = read_be(data);
  if (v == 0 || v >= group.q()) {
    throw EncodingError(EncodingError::Kind::kCoordinateOutOfRange, "identifier must lie in [1, q-1]");
  }
  return group.scalars(v);
}

inline Bytes encode(const Point& pt) { return serialize_point(pt); }

/// Credential file: identifier || share point (3 * field_byte_length bytes).
inline Bytes encode(const Credential& cred) {
  Bytes out = encode(cred.identifier, *cred.share.group());
  const Bytes pt = serialize_point(cred.share);
  out.insert(out.end(), pt.begin(), pt.end());
  return out;
}

inline std::size_t credential_size(const CurveParams& params) { return 3 * params.field_byte_length(); }

inline Credential decode_credential(std::span<const std::uint8_t> data, const CurveParams& params) {
  const std::size_t width = params.field_byte_length();
  if (data.size() != 3 * width) {
    throw EncodingError(EncodingError::Kind::kBadLength,
                        "credential must be " + std::to_string(3 * width) + " bytes, got " + std::to_string(data.size()));
  }
  return Credential{decode_identifier(data.first(width), *params.group()),
                    deserialize_point(data.subspan(width), params)};
}

inline nlohmann::json encode(const GroupPublicParams& pub) {
  return {{"curve", curve_to_json(pub.params)},
          {"commitment", to_hex(pub.commitment)},
          {"session_id", to_hex(pub.session_id)},
          {"degree", pub.degree}};
}

inline GroupPublicParams decode_public(const nlohmann::json& doc) {
  try {
    GroupPublicParams pub{curve_from_json(doc.at("curve")), {}, from_hex(doc.at("session_id").get<std::string>()),
                          doc.value("degree", 1u)};
    const Bytes commitment = from_hex(doc.at("commitment").get<std::string>());
    if (commitment.size() != kDigestLength) {
      throw EncodingError(EncodingError::Kind::kBadLength, "commitment must be 64 bytes");
    }
    std::copy(commitment.begin(), commitment.end(), pub.commitment.begin());
    return pub;
  } catch (const nlohmann::json::exception& e) {
    throw EncodingError(EncodingError::Kind::kMalformed, std::string("public params JSON: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw EncodingError(EncodingError::Kind::kMalformed, std::string("public params JSON: ") + e.what());
  }
}

inline Bytes read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

inline void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
}

}  // namespace v2xauth::wire
