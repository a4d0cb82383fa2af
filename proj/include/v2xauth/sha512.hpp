#pragma once

#include <openssl/evp.h>

#include <memory>
#include <span>
#include <stdexcept>

#include "v2xauth/bytes.hpp"

namespace v2xauth {

// Incremental SHA-512 over OpenSSL EVP.
class Sha512 {
 public:
  Sha512() : ctx_(EVP_MD_CTX_new(), &EVP_MD_CTX_free) {
    if (!ctx_ || EVP_DigestInit_ex(ctx_.get(), EVP_sha512(), nullptr) != 1) {
      throw std::runtime_error("EVP SHA-512 init failed");
    }
  }

  Sha512& update(std::span<const std::uint8_t> data) {
    if (EVP_DigestUpdate(ctx_.get(), data.data(), data.size()) != 1) {
      throw std::runtime_error("EVP SHA-512 update failed");
    }
    return *this;
  }

  Digest finish() {
    Digest out{};
    unsigned int len = 0;
    if (EVP_DigestFinal_ex(ctx_.get(), out.data(), &len) != 1 || len != out.size()) {
      throw std::runtime_error("EVP SHA-512 final failed");
    }
    return out;
  }

 private:
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx_;
};

inline Digest sha512(std::span<const std::uint8_t> data) { return Sha512{}.update(data).finish(); }

}  // namespace v2xauth
