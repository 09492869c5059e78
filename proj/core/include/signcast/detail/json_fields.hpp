#pragma once

// Checked field access for JSON documents arriving from files or the wire.
// Every failure is a DecodeError naming the missing or mistyped field.

#include <nlohmann/json.hpp>

#include <cstdint>
#include <string>
#include <string_view>

#include "signcast/crypto/bytes.hpp"
#include "signcast/errors.hpp"

namespace signcast::detail {

inline const nlohmann::json& RequireField(const nlohmann::json& j, std::string_view key) {
  if (!j.is_object()) throw DecodeError("expected a JSON object while reading '" + std::string(key) + "'");
  auto it = j.find(key);
  if (it == j.end()) throw DecodeError("missing JSON field '" + std::string(key) + "'");
  return *it;
}

inline std::string RequireString(const nlohmann::json& j, std::string_view key) {
  const auto& v = RequireField(j, key);
  if (!v.is_string()) throw DecodeError("JSON field '" + std::string(key) + "' must be a string");
  return v.get<std::string>();
}

inline std::uint64_t RequireU64(const nlohmann::json& j, std::string_view key) {
  const auto& v = RequireField(j, key);
  if (!v.is_number_unsigned()) throw DecodeError("JSON field '" + std::string(key) + "' must be a non-negative integer");
  return v.get<std::uint64_t>();
}

inline bool RequireBool(const nlohmann::json& j, std::string_view key) {
  const auto& v = RequireField(j, key);
  if (!v.is_boolean()) throw DecodeError("JSON field '" + std::string(key) + "' must be a boolean");
  return v.get<bool>();
}

inline const nlohmann::json& RequireArray(const nlohmann::json& j, std::string_view key) {
  const auto& v = RequireField(j, key);
  if (!v.is_array()) throw DecodeError("JSON field '" + std::string(key) + "' must be an array");
  return v;
}

inline Bytes RequireHex(const nlohmann::json& j, std::string_view key) { return FromHex(RequireString(j, key)); }

}  // namespace signcast::detail
