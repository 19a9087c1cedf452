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

#include "careledger/careflow/documents.hpp"

#include "careledger/careflow/errors.hpp"

namespace careledger::careflow {

std::string serialize(const RequestDocument& d) {
  Json j = {{"type", "dose_request"},
            {"patient", d.patient},
            {"kind", std::string(to_string(d.kind))},
            {"created_at_ms", d.created_at_ms},
            {"suggestion", suggestion_to_json(d.suggestion)},
            {"note", d.note}};
  if (d.motion_file) j["motion_file"] = d.motion_file->hex();
  if (d.features) j["features"] = to_json(*d.features);
  return canonical(j);
}

std::string serialize(const PrescriptionDocument& d) {
  Json j = {{"type", "prescription"},
            {"patient", d.patient},
            {"request", d.request.hex()},
            {"dose_mg", d.dose_mg},
            {"decision", std::string(to_string(d.decision))},
            {"prescriber", d.prescriber},
            {"created_at_ms", d.created_at_ms}};
  return canonical(j);
}

RequestDocument parse_request_document(std::string_view bytes) {
  try {
    const Json j = jf::parse(bytes);
    if (jf::str(j, "type") != "dose_request") throw FormatError("not a dose_request document");
    RequestDocument d;
    d.patient = jf::str(j, "patient");
    auto kind = parse_dose_request_kind(jf::str(j, "kind"));
    if (!kind) throw FormatError("unknown request kind");
    d.kind = *kind;
    d.created_at_ms = jf::i64(j, "created_at_ms");
    d.motion_file = jf::opt_digest(j, "motion_file");
    if (jf::has(j, "features")) d.features = feature_vector_from_json(jf::at(j, "features"));
    d.suggestion = suggestion_from_json(jf::at(j, "suggestion"));
    d.note = jf::str(j, "note");
    return d;
  } catch (const FormatError& e) {
    throw ValidationError(std::string("request document: ") + e.what());
  }
}

PrescriptionDocument parse_prescription_document(std::string_view bytes) {
  try {
    const Json j = jf::parse(bytes);
    if (jf::str(j, "type") != "prescription") throw FormatError("not a prescription document");
    PrescriptionDocument d;
    d.patient = jf::str(j, "patient");
    d.request = jf::digest(j, "request");
    d.dose_mg = jf::num(j, "dose_mg");
    auto dec = parse_decision(jf::str(j, "decision"));
    if (!dec) throw FormatError("unknown decision");
    d.decision = *dec;
    d.prescriber = jf::str(j, "prescriber");
    d.created_at_ms = jf::i64(j, "created_at_ms");
    return d;
  } catch (const FormatError& e) {
    throw ValidationError(std::string("prescription document: ") + e.what());
  }
}

}  // namespace careledger::careflow
