#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>

#include "v2xauth/bytes.hpp"
#include "v2xauth/sha512.hpp"

namespace v2xauth {

/// Deterministic byte source: SHA-512(seed || counter) blocks.
///
/// The output stream is a pure function of the seed on every platform, which
/// is what makes simulator transcripts reproducible. Not a certified DRBG.
class Drbg {
 public:
  explicit Drbg(std::uint64_t seed) {
    for (int i = 7; i >= 0; --i) {
      seed_.push_back(static_cast<std::uint8_t>(seed >> (8 * i)));
    }
  }

  explicit Drbg(std::span<const std::uint8_t> seed) : seed_(seed.begin(), seed.end()) {}

  static Drbg from_os_entropy() {
    std::random_device rd;
    Bytes seed;
    for (int i = 0; i < 16; ++i) {
      const auto word = rd();
      for (int s = 0; s < 4; ++s) seed.push_back(static_cast<std::uint8_t>(word >> (8 * s)));
    }
    return Drbg(seed);
  }

  void fill(std::span<std::uint8_t> out) {
    for (auto& b : out) {
      if (offset_ == block_.size()) refill();
      b = block_[offset_++];
    }
  }

  /// Uniform integer in [0, bound) by rejection on the bit length of bound.
  BigInt below(const BigInt& bound) {
    if (bound <= 0) throw std::invalid_argument("Drbg::below requires a positive bound");
    const std::size_t bits = mpz_sizeinbase(bound.get_mpz_t(), 2);
    const std::size_t nbytes = (bits + 7) / 8;
    const unsigned excess = static_cast<unsigned>(nbytes * 8 - bits);
    Bytes buf(nbytes);
    for (;;) {
      fill(buf);
      buf[0] = static_cast<std::uint8_t>(buf[0] & (0xFF >> excess));
      BigInt candidate = read_be(buf);
      if (candidate < bound) return candidate;
    }
  }

  /// Uniform integer in [lo, hi].
  BigInt in_range(const BigInt& lo, const BigInt& hi) {
    if (hi < lo) throw std::invalid_argument("Drbg::in_range with empty range");
    BigInt span = hi - lo + 1;
    return lo + below(span);
  }

 private:
  void refill() {
    Sha512 h;
    h.update(seed_);
    std::uint8_t ctr[8];
    for (int i = 0; i < 8; ++i) ctr[i] = static_cast<std::uint8_t>(counter_ >> (8 * (7 - i)));
    h.update(ctr);
    block_ = h.finish();
    ++counter_;
    offset_ = 0;
  }

  Bytes seed_;
  std::uint64_t counter_ = 0;
  Digest block_{};
  std::size_t offset_ = kDigestLength;
};

}  // namespace v2xauth
