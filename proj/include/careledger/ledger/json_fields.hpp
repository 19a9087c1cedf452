// Copyright 2026 The CareLedger Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Strict field accessors for canonical JSON objects. Every accessor throws
// FormatError naming the field, so a malformed document never degrades into a
// default value.

#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "careledger/contract/enums.hpp"
#include "careledger/crypto/crypto.hpp"

namespace careledger {

using Json = nlohmann::json;

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace jf {

inline const Json& at(const Json& j, const char* key) {
  if (!j.is_object()) throw FormatError(std::string("expected object holding '") + key + "'");
  auto it = j.find(key);
  if (it == j.end()) throw FormatError(std::string("missing field '") + key + "'");
  return *it;
}

inline bool has(const Json& j, const char* key) { return j.is_object() && j.contains(key); }

inline std::string str(const Json& j, const char* key) {
  const Json& v = at(j, key);
  if (!v.is_string()) throw FormatError(std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

inline std::int64_t i64(const Json& j, const char* key) {
  const Json& v = at(j, key);
  if (!v.is_number_integer()) {
    throw FormatError(std::string("field '") + key + "' must be an integer");
  }
  return v.get<std::int64_t>();
}

inline std::uint64_t u64(const Json& j, const char* key) {
  const Json& v = at(j, key);
  if (!v.is_number_unsigned()) {
    throw FormatError(std::string("field '") + key + "' must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

inline double num(const Json& j, const char* key) {
  const Json& v = at(j, key);
  if (!v.is_number()) throw FormatError(std::string("field '") + key + "' must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw FormatError(std::string("field '") + key + "' must be finite");
  return d;
}

inline bool boolean(const Json& j, const char* key) {
  const Json& v = at(j, key);
  if (!v.is_boolean()) throw FormatError(std::string("field '") + key + "' must be a boolean");
  return v.get<bool>();
}

inline crypto::Digest digest(const Json& j, const char* key) {
  try {
    return crypto::Digest::from_hex(str(j, key));
  } catch (const crypto::DecodeError& e) {
    throw FormatError(std::string("field '") + key + "': " + e.what());
  }
}

inline crypto::Bytes hex_bytes(const Json& j, const char* key) {
  try {
    return crypto::from_hex(str(j, key));
  } catch (const crypto::DecodeError& e) {
    throw FormatError(std::string("field '") + key + "': " + e.what());
  }
}

template <typename K>
K pubkey(const Json& j, const char* key) {
  try {
    return K::from_hex(str(j, key));
  } catch (const crypto::DecodeError& e) {
    throw FormatError(std::string("field '") + key + "': " + e.what());
  }
}

inline Role role(const Json& j, const char* key) {
  auto r = parse_role(str(j, key));
  if (!r) throw FormatError(std::string("field '") + key + "': unknown role");
  return *r;
}

inline FileKind kind(const Json& j, const char* key) {
  auto k = parse_file_kind(str(j, key));
  if (!k) throw FormatError(std::string("field '") + key + "': unknown file kind");
  return *k;
}

inline std::optional<std::string> opt_str(const Json& j, const char* key) {
  if (!has(j, key)) return std::nullopt;
  return str(j, key);
}

inline std::optional<double> opt_num(const Json& j, const char* key) {
  if (!has(j, key)) return std::nullopt;
  return num(j, key);
}

inline std::optional<crypto::Digest> opt_digest(const Json& j, const char* key) {
  if (!has(j, key)) return std::nullopt;
  return digest(j, key);
}

inline Json parse(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    throw FormatError(std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace jf

// Canonical serialization: sorted keys, no whitespace, UTF-8.
inline std::string canonical(const Json& j) { return j.dump(); }

}  // namespace careledger
