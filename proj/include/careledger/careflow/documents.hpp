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

// Plaintext documents the workflows encrypt and anchor: the request a patient
// files (routine or emergency) and the prescription that answers it. Both are
// canonical JSON.

#pragma once

#include <optional>
#include <string>

#include "careledger/careflow/motion.hpp"
#include "careledger/ledger/transaction.hpp"

namespace careledger::careflow {

struct RequestDocument {
  std::string patient;
  DoseRequestKind kind = DoseRequestKind::routine;
  std::int64_t created_at_ms = 0;
  std::optional<ContentHash> motion_file;
  std::optional<FeatureVector> features;
  DoseSuggestion suggestion;
  std::string note;

  bool operator==(const RequestDocument&) const = default;
};

struct PrescriptionDocument {
  std::string patient;
  TxId request;
  double dose_mg = 0;
  Decision decision = Decision::confirmed;
  std::string prescriber;
  std::int64_t created_at_ms = 0;

  bool operator==(const PrescriptionDocument&) const = default;
};

std::string serialize(const RequestDocument& d);
std::string serialize(const PrescriptionDocument& d);

// ValidationError on anything malformed or of the wrong document type.
RequestDocument parse_request_document(std::string_view bytes);
PrescriptionDocument parse_prescription_document(std::string_view bytes);

}  // namespace careledger::careflow
