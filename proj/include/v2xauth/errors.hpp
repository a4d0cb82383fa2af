#pragma once

#include <stdexcept>
#include <string>

namespace v2xauth {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Zero or non-unit modular inverse. Upstream this usually means two
// identifiers collided.
class NotInvertible : public Error {
 public:
  using Error::Error;
};

class CurveMismatch : public Error {
 public:
  CurveMismatch() : Error("points belong to different curve groups") {}
};

class InvalidCurve : public Error {
 public:
  using Error::Error;
};

class EncodingError : public Error {
 public:
  enum class Kind { kBadLength, kCoordinateOutOfRange, kNotOnCurve, kInfinity, kMalformed };

  EncodingError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

// Protocol preconditions violated by the caller (duplicate identifiers,
// forbidden identifier 0, rosters that are too small, ...).
class ProtocolError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace v2xauth
