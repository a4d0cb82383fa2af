#pragma once

#include <filesystem>

#include "toy_oracle.hpp"
#include "v2xauth/curve.hpp"

namespace fixtures {

inline const v2xauth::CurveParams& toy_curve() {
  static const auto params = v2xauth::CurveParams::create("toy", 17, 2, 2, 5, 1, 19, 1);
  return params;
}

inline const v2xauth::CurveParams& prod_curve() {
  static const auto params =
      v2xauth::load_curve_file(std::filesystem::path(V2XAUTH_DEFAULT_CURVE_DIR) / "prod512.json");
  return params;
}

inline v2xauth::Point toy_point(long x, long y) { return toy_curve().point(x, y); }

inline v2xauth::Point to_point(const toy_oracle::Pt& p) {
  return p ? toy_point(p->first, p->second) : toy_curve().infinity();
}

inline toy_oracle::Pt to_oracle(const v2xauth::Point& p) {
  if (p.is_infinity()) return std::nullopt;
  return std::make_pair(p.x().value().get_si(), p.y().value().get_si());
}

}  // namespace fixtures
