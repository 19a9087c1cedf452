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

// careflow::Gateway over the node's HTTP API. Error responses come back as the
// exceptions the node raised: ContractError, AccessDenied, IntegrityError,
// ValidationError or CryptoError; anything else is a TransportError.

#pragma once

#include <memory>
#include <string>

#include "careledger/careflow/gateway.hpp"

namespace careledger::cli {

class TransportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class HttpGateway : public careflow::Gateway {
 public:
  // base_url like "http://127.0.0.1:8470".
  explicit HttpGateway(const std::string& base_url);
  ~HttpGateway() override;

  // Challenge-response login; later calls carry the session token.
  void login(const crypto::KeyPair& me);
  void set_token(std::string token) { token_ = std::move(token); }
  const std::string& token() const { return token_; }

  // Public: no session needed.
  careflow::Receipt request_registration(const Transaction& tx);

  careflow::NodeStatus status() override;
  careflow::Receipt submit(const Transaction& tx) override;
  careflow::Receipt submit_file(crypto::ByteView sealed_blob, const Transaction& store_tx) override;
  std::optional<contract::UserRecord> user(const std::string& user_id) override;
  std::vector<contract::UserRecord> users(std::optional<Role> role) override;
  std::vector<contract::UserRecord> pending() override;
  std::optional<contract::FileRecord> file(const ContentHash& h) override;
  std::vector<contract::FileRecord> files(std::optional<std::string> patient) override;
  contract::FetchDecision file_key(const ContentHash& h) override;
  crypto::Bytes open_file(const ContentHash& h, const crypto::FileKey& key) override;
  contract::IntegrityReport integrity(const ContentHash& h,
                                      const std::optional<crypto::FileKey>& key) override;
  std::vector<contract::DoseRequest> dose_requests(std::optional<std::string> patient) override;
  std::optional<double> last_approved_dose(const std::string& patient) override;
  ledger::ChainReport verify_chain() override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::string token_;
};

}  // namespace careledger::cli
