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

// Challenge-response login. The client signs
//   "careledger-login-v1\n" + user_id + "\n" + nonce_hex
// with its Ed25519 key; a nonce is consumed by the first response, good or
// bad.

#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <string>

#include "careledger/careflow/client.hpp"
#include "careledger/contract/state.hpp"

namespace careledger::service {

class AuthError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Session {
  std::string token;  // 32 random bytes, hex
  std::string user_id;
  std::int64_t expires_at_ms = 0;
};

std::string login_message(const std::string& user_id, const std::string& nonce_hex);

class SessionStore {
 public:
  static constexpr std::int64_t kChallengeTtlMs = 60'000;

  explicit SessionStore(std::int64_t ttl_ms, careflow::Clock clock = now_ms)
      : ttl_ms_(ttl_ms), clock_(std::move(clock)) {}

  // AuthError for unknown or pending users.
  std::string challenge(const contract::ContractState& state, const std::string& user_id);
  // AuthError for an unknown, expired or reused nonce, or a bad signature.
  Session respond(const contract::ContractState& state, const std::string& user_id,
                  const std::string& nonce_hex, crypto::ByteView signature);

  // nullopt for unknown or expired tokens.
  std::optional<Session> lookup(const std::string& token);
  void revoke(const std::string& token);

 private:
  struct Challenge {
    std::string user_id;
    std::int64_t expires_at_ms;
  };

  std::int64_t ttl_ms_;
  careflow::Clock clock_;
  std::mutex m_;
  std::map<std::string, Challenge> challenges_;  // by nonce
  std::map<std::string, Session> sessions_;      // by token
};

}  // namespace careledger::service
