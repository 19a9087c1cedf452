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

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>

#include "careledger/ledger/transaction.hpp"

namespace careledger::contract {

struct UserRecord {
  std::string user_id;
  Role role = Role::patient;
  std::string display_name;
  std::optional<crypto::SignPublicKey> sign_public;  // set once active
  std::optional<crypto::EncPublicKey> enc_public;
  UserStatus status = UserStatus::pending;
  std::int64_t registered_at_ms = 0;  // request time while pending, approval time after
  std::optional<std::string> bound_patient;

  bool active() const { return status == UserStatus::active; }
  bool operator==(const UserRecord&) const = default;
};

struct FileRecord {
  ContentHash content_hash;
  Digest plaintext_hash;
  std::string owner_patient;
  std::string uploader;
  FileKind kind = FileKind::medical_history;
  std::int64_t created_at_ms = 0;
  std::map<std::string, crypto::WrappedKey> wrapped_keys;
  std::set<std::string> revoked;

  // Holds a wrapped key that has not been revoked.
  bool key_live_for(const std::string& user) const {
    return wrapped_keys.contains(user) && !revoked.contains(user);
  }
  bool operator==(const FileRecord&) const = default;
};

struct DoseRequest {
  TxId id;
  std::string patient_id;
  DoseRequestKind kind = DoseRequestKind::routine;
  std::int64_t created_at_ms = 0;
  ContentHash request_file;
  std::optional<ContentHash> feature_file;
  DoseSuggestion suggestion;
  DoseRequestStatus status = DoseRequestStatus::pending_physician;

  // Filled in by the decision.
  std::optional<std::string> decided_by;
  std::optional<std::int64_t> decided_at_ms;
  std::optional<double> decided_dose_mg;
  std::optional<bool> approved;                   // emergency only
  std::optional<double> cap_mg;                   // emergency only: cap in force at decision
  std::optional<ContentHash> prescription_file;  // routine only

  bool open() const {
    return status == DoseRequestStatus::pending_physician ||
           status == DoseRequestStatus::emergency_pending;
  }
  bool operator==(const DoseRequest&) const = default;
};

struct ContractState {
  std::map<std::string, UserRecord> users;
  std::deque<std::string> pending_registrations;  // request order
  std::map<ContentHash, FileRecord> files;
  std::map<TxId, DoseRequest> dose_requests;
  std::map<std::string, double> last_approved_dose;
  std::set<TxId> applied;  // every tx folded in so far; a signed tx applies once

  bool operator==(const ContractState&) const = default;
};

Json to_json(const UserRecord& u);
Json to_json(const FileRecord& f);
Json to_json(const DoseRequest& r);

// Inverses of the above; FormatError on malformed input.
UserRecord user_from_json(const Json& j);
FileRecord file_from_json(const Json& j);
DoseRequest dose_request_from_json(const Json& j);

// Full canonical form; equal states serialize to identical bytes.
Json to_json(const ContractState& s);
std::string canonical_state(const ContractState& s);
Digest state_digest(const ContractState& s);

}  // namespace careledger::contract
