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

#include "careledger/contract/state.hpp"

namespace careledger::contract {

Json to_json(const UserRecord& u) {
  Json j;
  j["user_id"] = u.user_id;
  j["role"] = to_string(u.role);
  j["display_name"] = u.display_name;
  j["status"] = to_string(u.status);
  j["registered_at_ms"] = u.registered_at_ms;
  if (u.sign_public) j["sign_public"] = u.sign_public->hex();
  if (u.enc_public) j["enc_public"] = u.enc_public->hex();
  if (u.bound_patient) j["bound_patient"] = *u.bound_patient;
  return j;
}

Json to_json(const FileRecord& f) {
  Json j;
  j["content_hash"] = f.content_hash.hex();
  j["plaintext_hash"] = f.plaintext_hash.hex();
  j["owner_patient"] = f.owner_patient;
  j["uploader"] = f.uploader;
  j["kind"] = to_string(f.kind);
  j["created_at_ms"] = f.created_at_ms;
  Json keys = Json::object();
  for (const auto& [id, w] : f.wrapped_keys) keys[id] = crypto::to_hex(w.wrapped_bytes);
  j["wrapped_keys"] = std::move(keys);
  Json revoked = Json::array();
  for (const auto& id : f.revoked) revoked.push_back(id);
  j["revoked"] = std::move(revoked);
  return j;
}

Json to_json(const DoseRequest& r) {
  Json j;
  j["id"] = r.id.hex();
  j["patient_id"] = r.patient_id;
  j["kind"] = to_string(r.kind);
  j["created_at_ms"] = r.created_at_ms;
  j["request_file"] = r.request_file.hex();
  if (r.feature_file) j["feature_file"] = r.feature_file->hex();
  j["suggestion"] = suggestion_to_json(r.suggestion);
  j["status"] = to_string(r.status);
  if (r.decided_by) j["decided_by"] = *r.decided_by;
  if (r.decided_at_ms) j["decided_at_ms"] = *r.decided_at_ms;
  if (r.decided_dose_mg) j["decided_dose_mg"] = *r.decided_dose_mg;
  if (r.approved) j["approved"] = *r.approved;
  if (r.cap_mg) j["cap_mg"] = *r.cap_mg;
  if (r.prescription_file) j["prescription_file"] = r.prescription_file->hex();
  return j;
}

Json to_json(const ContractState& s) {
  Json users = Json::object();
  for (const auto& [id, u] : s.users) users[id] = to_json(u);
  Json pending = Json::array();
  for (const auto& id : s.pending_registrations) pending.push_back(id);
  Json files = Json::object();
  for (const auto& [h, f] : s.files) files[h.hex()] = to_json(f);
  Json requests = Json::object();
  for (const auto& [id, r] : s.dose_requests) requests[id.hex()] = to_json(r);
  Json doses = Json::object();
  for (const auto& [p, d] : s.last_approved_dose) doses[p] = d;
  Json applied = Json::array();
  for (const auto& id : s.applied) applied.push_back(id.hex());

  Json j;
  j["users"] = std::move(users);
  j["pending_registrations"] = std::move(pending);
  j["files"] = std::move(files);
  j["dose_requests"] = std::move(requests);
  j["last_approved_dose"] = std::move(doses);
  j["applied"] = std::move(applied);
  return j;
}

UserRecord user_from_json(const Json& j) {
  UserRecord u;
  u.user_id = jf::str(j, "user_id");
  u.role = jf::role(j, "role");
  u.display_name = jf::str(j, "display_name");
  auto status = parse_user_status(jf::str(j, "status"));
  if (!status) throw FormatError("unknown user status");
  u.status = *status;
  u.registered_at_ms = jf::i64(j, "registered_at_ms");
  if (jf::has(j, "sign_public")) u.sign_public = jf::pubkey<crypto::SignPublicKey>(j, "sign_public");
  if (jf::has(j, "enc_public")) u.enc_public = jf::pubkey<crypto::EncPublicKey>(j, "enc_public");
  u.bound_patient = jf::opt_str(j, "bound_patient");
  return u;
}

FileRecord file_from_json(const Json& j) {
  FileRecord f;
  f.content_hash = jf::digest(j, "content_hash");
  f.plaintext_hash = jf::digest(j, "plaintext_hash");
  f.owner_patient = jf::str(j, "owner_patient");
  f.uploader = jf::str(j, "uploader");
  f.kind = jf::kind(j, "kind");
  f.created_at_ms = jf::i64(j, "created_at_ms");
  const Json& keys = jf::at(j, "wrapped_keys");
  if (!keys.is_object()) throw FormatError("wrapped_keys is not an object");
  for (const auto& [id, hex] : keys.items()) {
    if (!hex.is_string()) throw FormatError("wrapped key is not a hex string");
    try {
      f.wrapped_keys[id] = crypto::WrappedKey{id, crypto::from_hex(hex.get<std::string>())};
    } catch (const crypto::DecodeError& e) {
      throw FormatError(e.what());
    }
  }
  const Json& revoked = jf::at(j, "revoked");
  if (!revoked.is_array()) throw FormatError("revoked is not an array");
  for (const auto& id : revoked) {
    if (!id.is_string()) throw FormatError("revoked id is not a string");
    f.revoked.insert(id.get<std::string>());
  }
  return f;
}

DoseRequest dose_request_from_json(const Json& j) {
  DoseRequest r;
  r.id = jf::digest(j, "id");
  r.patient_id = jf::str(j, "patient_id");
  auto kind = parse_dose_request_kind(jf::str(j, "kind"));
  auto status = parse_dose_request_status(jf::str(j, "status"));
  if (!kind || !status) throw FormatError("unknown dose request kind or status");
  r.kind = *kind;
  r.status = *status;
  r.created_at_ms = jf::i64(j, "created_at_ms");
  r.request_file = jf::digest(j, "request_file");
  r.feature_file = jf::opt_digest(j, "feature_file");
  r.suggestion = suggestion_from_json(jf::at(j, "suggestion"));
  r.decided_by = jf::opt_str(j, "decided_by");
  if (jf::has(j, "decided_at_ms")) r.decided_at_ms = jf::i64(j, "decided_at_ms");
  r.decided_dose_mg = jf::opt_num(j, "decided_dose_mg");
  if (jf::has(j, "approved")) r.approved = jf::boolean(j, "approved");
  r.cap_mg = jf::opt_num(j, "cap_mg");
  r.prescription_file = jf::opt_digest(j, "prescription_file");
  return r;
}

std::string canonical_state(const ContractState& s) { return canonical(to_json(s)); }

Digest state_digest(const ContractState& s) {
  return crypto::content_hash(canonical_state(s));
}

}  // namespace careledger::contract
