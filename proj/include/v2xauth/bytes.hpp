#pragma once

#include <gmpxx.h>

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace v2xauth {

using Bytes = std::vector<std::uint8_t>;
using BigInt = mpz_class;

inline constexpr std::size_t kDigestLength = 64;
using Digest = std::array<std::uint8_t, kDigestLength>;

inline std::string to_hex(std::span<const std::uint8_t> data) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(data.size() * 2);
  for (std::uint8_t b : data) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0x0F]);
  }
  return out;
}

inline Bytes from_hex(std::string_view hex) {
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    throw std::invalid_argument("invalid hex digit");
  };
  if (hex.size() % 2 != 0) {
    throw std::invalid_argument("hex string has odd length");
  }
  Bytes out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = static_cast<std::uint8_t>(nibble(hex[2 * i]) << 4 | nibble(hex[2 * i + 1]));
  }
  return out;
}

inline BigInt parse_decimal(const std::string& text) {
  if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos) {
    throw std::invalid_argument("not a non-negative decimal integer: '" + text + "'");
  }
  return BigInt(text, 10);
}

// Big-endian, left-padded to exactly `width` bytes.
inline void append_be(const BigInt& value, std::size_t width, Bytes& out) {
  if (value < 0) {
    throw std::invalid_argument("cannot encode a negative integer");
  }
  const std::size_t needed = value == 0 ? 0 : (mpz_sizeinbase(value.get_mpz_t(), 2) + 7) / 8;
  if (needed > width) {
    throw std::invalid_argument("integer does not fit in " + std::to_string(width) + " bytes");
  }
  const std::size_t start = out.size();
  out.resize(start + width, 0);
  if (needed > 0) {
    std::size_t written = 0;
    mpz_export(out.data() + start + (width - needed), &written, 1, 1, 1, 0, value.get_mpz_t());
  }
}

inline BigInt read_be(std::span<const std::uint8_t> data) {
  BigInt value;
  if (!data.empty()) {
    mpz_import(value.get_mpz_t(), data.size(), 1, 1, 1, 0, data.data());
  }
  return value;
}

}  // namespace v2xauth
