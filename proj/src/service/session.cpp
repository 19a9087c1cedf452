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

#include "careledger/service/session.hpp"

#include "careledger/contract/contract.hpp"

namespace careledger::service {

std::string login_message(const std::string& user_id, const std::string& nonce_hex) {
  return "careledger-login-v1\n" + user_id + "\n" + nonce_hex;
}

std::string SessionStore::challenge(const contract::ContractState& state,
                                    const std::string& user_id) {
  if (contract::find_active(state, user_id) == nullptr) {
    throw AuthError(contract::kNotAuthenticated);
  }
  const std::string nonce = crypto::to_hex(crypto::random_bytes(32));
  const std::int64_t now = clock_();
  std::lock_guard lk(m_);
  std::erase_if(challenges_, [&](const auto& kv) { return kv.second.expires_at_ms <= now; });
  challenges_[nonce] = Challenge{user_id, now + kChallengeTtlMs};
  return nonce;
}

Session SessionStore::respond(const contract::ContractState& state, const std::string& user_id,
                              const std::string& nonce_hex, crypto::ByteView signature) {
  const std::int64_t now = clock_();
  {
    std::lock_guard lk(m_);
    auto it = challenges_.find(nonce_hex);
    if (it == challenges_.end()) throw AuthError("unknown or already used login challenge");
    const Challenge c = it->second;
    challenges_.erase(it);
    if (c.user_id != user_id) throw AuthError("login challenge was issued to another user");
    if (c.expires_at_ms <= now) throw AuthError("login challenge expired");
  }
  const contract::UserRecord* u = contract::find_active(state, user_id);
  if (u == nullptr) throw AuthError(contract::kNotAuthenticated);
  bool good = false;
  try {
    good = crypto::verify(*u->sign_public, crypto::as_bytes(login_message(user_id, nonce_hex)),
                          signature);
  } catch (const crypto::DecodeError&) {
  }
  if (!good) throw AuthError("bad login signature");

  Session s{crypto::to_hex(crypto::random_bytes(32)), user_id, now + ttl_ms_};
  std::lock_guard lk(m_);
  std::erase_if(sessions_, [&](const auto& kv) { return kv.second.expires_at_ms <= now; });
  sessions_[s.token] = s;
  return s;
}

std::optional<Session> SessionStore::lookup(const std::string& token) {
  const std::int64_t now = clock_();
  std::lock_guard lk(m_);
  auto it = sessions_.find(token);
  if (it == sessions_.end()) return std::nullopt;
  if (it->second.expires_at_ms <= now) {
    sessions_.erase(it);
    return std::nullopt;
  }
  return it->second;
}

void SessionStore::revoke(const std::string& token) {
  std::lock_guard lk(m_);
  sessions_.erase(token);
}

}  // namespace careledger::service
