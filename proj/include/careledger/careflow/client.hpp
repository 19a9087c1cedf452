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

// Client side of the care workflows. All key material stays here: files are
// sealed and keys wrapped and unwrapped locally, every transaction is signed
// locally, and the node only ever sees ciphertext, wrapped keys, and (for a
// fetch) the one file key being used.

#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "careledger/careflow/decision.hpp"
#include "careledger/careflow/documents.hpp"
#include "careledger/careflow/errors.hpp"
#include "careledger/careflow/gateway.hpp"
#include "careledger/careflow/motion.hpp"

namespace careledger::careflow {

using Clock = std::function<std::int64_t()>;

// The unsigned transaction a newcomer posts to ask for an account.
Transaction registration_request(const std::string& user_id, Role role,
                                 const std::string& display_name,
                                 std::optional<std::string> bound_patient = std::nullopt,
                                 std::int64_t timestamp_ms = now_ms());

struct DoseOutcome {
  TxId request_id;
  DoseSuggestion suggestion;
  DoseRequestStatus status = DoseRequestStatus::pending_physician;
  std::optional<ContentHash> prescription_file;  // set when auto-approved
};

struct EmergencyOutcome {
  TxId request_id;
  bool routed_to_physician = false;  // no approved dose on record
  std::optional<double> cap_mg;
};

class CareClient {
 public:
  CareClient(Gateway& gateway, crypto::KeyPair me, Clock clock = now_ms);

  const std::string& user_id() const { return me_.user_id; }
  Gateway& gateway() { return gateway_; }

  // Admin: generates the newcomer's keys, registers them, and hands them back.
  crypto::KeyPair approve_registration(const std::string& user_id);

  // The owner and the uploader always get a wrapped key; `extra_recipients`
  // adds more (a patient sharing at upload time).
  ContentHash upload_file(crypto::ByteView plaintext, FileKind kind,
                          const std::string& owner_patient,
                          const std::vector<std::string>& extra_recipients = {});
  crypto::Bytes fetch_file(const ContentHash& h);
  Receipt share_file(const ContentHash& h, const std::string& grantee);
  Receipt revoke(const ContentHash& h, const std::string& grantee);
  // With a key when the caller can unwrap one, store-level only otherwise.
  contract::IntegrityReport check_integrity(const ContentHash& h);

  std::vector<contract::UserRecord> physicians();

  // Device: validates, serializes and uploads for the bound patient.
  ContentHash ingest_motion(const MotionCapture& mc);

  // Patient: runs decision support on a motion capture and files the request.
  // An auto suggestion is recorded as a prescription straight away.
  DoseOutcome request_dose(const std::optional<ContentHash>& motion_file,
                           const std::string& note = {});
  std::vector<HistoryEntry> dose_history(const std::string& patient);

  // Physician. A confirm without a dose takes the suggested one.
  ContentHash prescribe(const TxId& request, Decision decision,
                        std::optional<double> dose_mg = std::nullopt);

  EmergencyOutcome emergency_request(const std::string& note = {});
  Receipt emergency_decide(const TxId& request, bool approve, double dose_mg);

 private:
  Transaction sign(TxPayload payload);
  contract::UserRecord self();
  std::vector<std::string> care_team(const std::string& patient);
  crypto::FileKey unwrap_for_me(const ContentHash& h);
  contract::DoseRequest find_request(const TxId& id);
  ContentHash upload_document(const std::string& doc, FileKind kind, const std::string& owner,
                              const std::vector<std::string>& extra);

  Gateway& gateway_;
  crypto::KeyPair me_;
  Clock clock_;
  std::optional<contract::UserRecord> self_;
};

}  // namespace careledger::careflow
