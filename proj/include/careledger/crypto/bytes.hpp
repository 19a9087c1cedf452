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

#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace careledger::crypto {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

// Raised for malformed encodings: bad hex, wrong key or signature length.
class DecodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline ByteView as_bytes(std::string_view s) {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

inline std::string_view as_chars(ByteView b) {
  return {reinterpret_cast<const char*>(b.data()), b.size()};
}

// Lowercase hex, two chars per byte.
std::string to_hex(ByteView bytes);

// Accepts lowercase hex only; anything else is a DecodeError so that every
// byte string has exactly one textual form.
Bytes from_hex(std::string_view hex);

template <std::size_t N>
std::array<std::uint8_t, N> from_hex_fixed(std::string_view hex) {
  if (hex.size() != 2 * N) {
    throw DecodeError("expected " + std::to_string(2 * N) +
                      " hex chars, got " + std::to_string(hex.size()));
  }
  Bytes raw = from_hex(hex);
  std::array<std::uint8_t, N> out{};
  std::copy(raw.begin(), raw.end(), out.begin());
  return out;
}

// Overwrites memory in a way the optimiser may not elide.
void secure_wipe(void* data, std::size_t size);

}  // namespace careledger::crypto
