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

// The contract: a pure state machine over ContractState. Every state change
// is apply(state, tx); queries never mutate.
//
// Access rules
//   patient     reads and writes own files of every kind; grants and revokes
//               on own files.
//   physician   reads every kind for a patient it has a care relationship
//               with; writes prescriptions for those patients.
//   nurse       reads dose_request and prescription files, only while the
//               patient has an open emergency request; decides emergencies.
//   iot_device  writes motion_capture for its bound patient; never reads.
//   admin       approves registrations; never holds a file key, never reads.
//
// A physician has a care relationship with a patient when it holds an
// unrevoked wrapped key on at least one file owned by that patient.

#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "careledger/contract/state.hpp"

namespace careledger::contract {

enum class Errc {
  already_registered,
  duplicate_pending,
  not_admin,
  unknown_pending,
  unauthenticated,
  bad_signature,
  duplicate_hash,
  device_owner_mismatch,
  not_owner,
  unknown_file,
  unknown_grantee,
  no_care_relationship,
  bad_status,
  no_cap,
  dose_exceeds_cap,
  unknown_request,
  forbidden,
  invalid_payload,
  duplicate_tx,
  policy,  // raised by the node (decision-support policy), never by apply
};

std::string_view to_string(Errc e);  // e.g. "AlreadyRegistered"
std::optional<Errc> parse_errc(std::string_view name);

class ContractError : public std::runtime_error {
 public:
  ContractError(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

inline constexpr const char* kNotAuthenticated = "User is not authenticated";
inline constexpr const char* kUserNotValid = "User is not valid";

// Strong guarantee: on ContractError the state is untouched.
void apply_in_place(ContractState& state, const Transaction& tx);
ContractState apply(const ContractState& state, const Transaction& tx);

struct Allow {
  crypto::WrappedKey wrapped_key;
};
struct Deny {
  std::string reason;
};
using FetchDecision = std::variant<Allow, Deny>;

FetchDecision authorize_fetch(const ContractState& state, const std::string& user_id,
                              const ContentHash& content_hash);

struct IntegrityReport {
  bool store_level = false;
  std::optional<bool> end_to_end;

  bool ok() const { return store_level && end_to_end.value_or(true); }
  std::string_view message() const {
    return ok() ? "Integrity completed" : "Integrity does not complete";
  }
};

// Throws ContractError{unknown_file}.
IntegrityReport check_integrity(const ContractState& state, const ContentHash& content_hash,
                                crypto::ByteView fetched_ciphertext,
                                std::optional<crypto::ByteView> decrypted_plaintext);

// Active physicians sorted by user_id.
std::vector<UserRecord> list_physicians(const ContractState& state);

bool has_care_relationship(const ContractState& state, const std::string& physician,
                           const std::string& patient);
bool has_open_emergency(const ContractState& state, const std::string& patient);

// Active patients the physician has a care relationship with, sorted.
std::vector<std::string> patients_of(const ContractState& state, const std::string& physician);

const UserRecord* find_active(const ContractState& state, const std::string& user_id);

// Whether `user` may create a file of `kind` for `owner` (write rules only;
// file existence and wrapped keys are checked by apply).
bool may_write(const ContractState& state, const UserRecord& user, FileKind kind,
               const std::string& owner);

}  // namespace careledger::contract
