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

// What a client needs from a node. Every call is made as one user (the
// session the gateway was opened for); the node filters reads by that user's
// rights. Mutations take transactions the client has already signed.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "careledger/contract/contract.hpp"
#include "careledger/ledger/chain.hpp"

namespace careledger::careflow {

struct NodeStatus {
  std::uint64_t height = 0;
  Digest tip_hash;
  double tau = 0.1;
  std::uint32_t max_consecutive_auto = 0;
};

struct Receipt {
  TxId tx_id;
  std::uint64_t height = 0;  // block the transaction was sealed in
};

class Gateway {
 public:
  virtual ~Gateway() = default;

  virtual NodeStatus status() = 0;

  // Both return once the sealing block is committed. Contract rejections
  // surface as contract::ContractError.
  virtual Receipt submit(const Transaction& tx) = 0;
  virtual Receipt submit_file(crypto::ByteView sealed_blob, const Transaction& store_tx) = 0;

  // Directory of active users; public keys included.
  virtual std::optional<contract::UserRecord> user(const std::string& user_id) = 0;
  virtual std::vector<contract::UserRecord> users(std::optional<Role> role) = 0;
  virtual std::vector<contract::UserRecord> pending() = 0;  // admin only

  // Files the caller owns, uploaded, or holds a key for.
  virtual std::optional<contract::FileRecord> file(const ContentHash& h) = 0;
  virtual std::vector<contract::FileRecord> files(std::optional<std::string> patient) = 0;

  virtual contract::FetchDecision file_key(const ContentHash& h) = 0;
  // Decrypts with the presented key after both integrity checks.
  // AccessDenied, IntegrityError or crypto::CryptoError.
  virtual crypto::Bytes open_file(const ContentHash& h, const crypto::FileKey& key) = 0;
  virtual contract::IntegrityReport integrity(const ContentHash& h,
                                              const std::optional<crypto::FileKey>& key) = 0;

  virtual std::vector<contract::DoseRequest> dose_requests(std::optional<std::string> patient) = 0;
  virtual std::optional<double> last_approved_dose(const std::string& patient) = 0;

  virtual ledger::ChainReport verify_chain() = 0;
};

}  // namespace careledger::careflow
