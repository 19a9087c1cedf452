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

// Ledger transactions. Payloads carry ids, hashes and wrapped keys only; file
// contents live encrypted in the blob store.
//
// Signing form (canonical JSON):
//   {"author":..,"payload":{"type":..,...},"timestamp_ms":..}
// tx_id is SHA-256 of those bytes and the Ed25519 signature covers the same
// bytes. RequestRegistration is the one unsigned payload: the requester has no
// keys until an admin approves it.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "careledger/contract/enums.hpp"
#include "careledger/crypto/crypto.hpp"
#include "careledger/ledger/json_fields.hpp"

namespace careledger {

using crypto::Digest;
using ContentHash = crypto::Digest;
using TxId = crypto::Digest;

struct DoseSuggestion {
  std::optional<double> dose_mg;
  std::optional<double> similarity;  // absent when there was nothing to compare with
  bool auto_approve = false;
  std::optional<ContentHash> basis;  // prior episode the suggestion came from

  bool operator==(const DoseSuggestion&) const = default;
};

struct RequestRegistration {
  std::string user_id;
  Role role = Role::patient;
  std::string display_name;
  std::optional<std::string> bound_patient;  // iot_device only

  bool operator==(const RequestRegistration&) const = default;
};

struct RegisterUser {
  std::string user_id;
  Role role = Role::patient;
  std::string display_name;
  crypto::SignPublicKey sign_public;
  crypto::EncPublicKey enc_public;
  std::optional<std::string> bound_patient;

  bool operator==(const RegisterUser&) const = default;
};

struct StoreFileHash {
  ContentHash content_hash;
  Digest plaintext_hash;
  FileKind kind = FileKind::medical_history;
  std::string owner_patient;
  std::vector<crypto::WrappedKey> wrapped_keys;

  bool operator==(const StoreFileHash&) const = default;
};

struct GrantAccess {
  ContentHash content_hash;
  std::string grantee;
  crypto::WrappedKey wrapped_key;

  bool operator==(const GrantAccess&) const = default;
};

struct RevokeAccess {
  ContentHash content_hash;
  std::string grantee;

  bool operator==(const RevokeAccess&) const = default;
};

struct OpenDoseRequest {
  std::string patient;
  ContentHash request_file;                // dose_request document
  std::optional<ContentHash> feature_file;  // motion capture the suggestion was computed from
  DoseSuggestion suggestion;

  bool operator==(const OpenDoseRequest&) const = default;
};

struct RecordPrescription {
  std::string patient;
  TxId request;
  double dose_mg = 0;
  ContentHash prescription_file;
  Decision decision = Decision::confirmed;

  bool operator==(const RecordPrescription&) const = default;
};

struct EmergencyDoseRequest {
  std::string patient;
  ContentHash request_file;

  bool operator==(const EmergencyDoseRequest&) const = default;
};

struct EmergencyDecision {
  TxId request_tx;
  std::string nurse;
  bool approved = false;
  double dose_mg = 0;

  bool operator==(const EmergencyDecision&) const = default;
};

using TxPayload =
    std::variant<RequestRegistration, RegisterUser, StoreFileHash, GrantAccess, RevokeAccess,
                 OpenDoseRequest, RecordPrescription, EmergencyDoseRequest, EmergencyDecision>;

// Value of the payload's "type" field.
std::string_view payload_type(const TxPayload& p);

struct Transaction {
  TxId tx_id;
  std::string author;
  std::int64_t timestamp_ms = 0;
  TxPayload payload;
  crypto::Bytes signature;  // empty only for RequestRegistration

  std::string signing_bytes() const;
  bool operator==(const Transaction&) const = default;
};

std::string signing_bytes(const std::string& author, std::int64_t timestamp_ms,
                          const TxPayload& payload);

Transaction make_signed(const std::string& author, const crypto::SignPrivateKey& key,
                        std::int64_t timestamp_ms, TxPayload payload);

// Only RequestRegistration may be unsigned; anything else is invalid_argument.
Transaction make_unsigned(const std::string& author, std::int64_t timestamp_ms,
                          TxPayload payload);

Json payload_to_json(const TxPayload& p);
TxPayload payload_from_json(const Json& j);

Json suggestion_to_json(const DoseSuggestion& s);
DoseSuggestion suggestion_from_json(const Json& j);

Json wrapped_key_to_json(const crypto::WrappedKey& w);
crypto::WrappedKey wrapped_key_from_json(const Json& j);

// {"author","payload","signature","timestamp_ms","tx_id"}
Json to_json(const Transaction& tx);

// Recomputes tx_id from the signing form and rejects a mismatch. The
// signature is not checked here; that needs the registry (contract::apply).
Transaction transaction_from_json(const Json& j);

std::int64_t now_ms();

}  // namespace careledger
