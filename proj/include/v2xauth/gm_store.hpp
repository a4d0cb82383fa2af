#pragma once

// Group-manager-only persistence of the secret polynomial. Files are written
// owner-read/write only.

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "v2xauth/scheme.hpp"

namespace v2xauth::gm_store {

inline void save_secret(const GroupSecret& secret, const std::filesystem::path& path) {
  nlohmann::json coeffs = nlohmann::json::array();
  for (const Scalar& c : detail::SecretAccess::coefficients(secret)) coeffs.push_back(c.value().get_str());
  const nlohmann::json doc{{"curve", curve_to_json(secret.params())}, {"coefficients", coeffs}};

  namespace fs = std::filesystem;
  {
    std::ofstream touch(path, std::ios::trunc);
    if (!touch) throw ConfigError("cannot write " + path.string());
  }
  fs::permissions(path, fs::perms::owner_read | fs::perms::owner_write, fs::perm_options::replace);
  std::ofstream out(path, std::ios::trunc);
  out << doc.dump(2) << '\n';
}

inline GroupSecret load_secret(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  try {
    nlohmann::json doc;
    in >> doc;
    CurveParams params = curve_from_json(doc.at("curve"));
    std::vector<Scalar> coeffs;
    for (const auto& c : doc.at("coefficients")) coeffs.push_back(params.scalar(parse_decimal(c.get<std::string>())));
    return GroupSecret::from_coefficients(std::move(params), std::move(coeffs));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("malformed group secret file " + path.string() + ": " + e.what());
  }
}

}  // namespace v2xauth::gm_store
