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

#include "careledger/ledger/transaction.hpp"

#include <chrono>

namespace careledger {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

Json payload_body(const RequestRegistration& p) {
  Json j;
  j["user_id"] = p.user_id;
  j["role"] = to_string(p.role);
  j["display_name"] = p.display_name;
  if (p.bound_patient) j["bound_patient"] = *p.bound_patient;
  return j;
}

Json payload_body(const RegisterUser& p) {
  Json j;
  j["user_id"] = p.user_id;
  j["role"] = to_string(p.role);
  j["display_name"] = p.display_name;
  j["sign_public"] = p.sign_public.hex();
  j["enc_public"] = p.enc_public.hex();
  if (p.bound_patient) j["bound_patient"] = *p.bound_patient;
  return j;
}

Json payload_body(const StoreFileHash& p) {
  Json j;
  j["content_hash"] = p.content_hash.hex();
  j["plaintext_hash"] = p.plaintext_hash.hex();
  j["kind"] = to_string(p.kind);
  j["owner_patient"] = p.owner_patient;
  Json keys = Json::array();
  for (const auto& w : p.wrapped_keys) keys.push_back(wrapped_key_to_json(w));
  j["wrapped_keys"] = std::move(keys);
  return j;
}

Json payload_body(const GrantAccess& p) {
  Json j;
  j["content_hash"] = p.content_hash.hex();
  j["grantee"] = p.grantee;
  j["wrapped_key"] = wrapped_key_to_json(p.wrapped_key);
  return j;
}

Json payload_body(const RevokeAccess& p) {
  Json j;
  j["content_hash"] = p.content_hash.hex();
  j["grantee"] = p.grantee;
  return j;
}

Json payload_body(const OpenDoseRequest& p) {
  Json j;
  j["patient"] = p.patient;
  j["request_file"] = p.request_file.hex();
  if (p.feature_file) j["feature_file"] = p.feature_file->hex();
  j["suggestion"] = suggestion_to_json(p.suggestion);
  return j;
}

Json payload_body(const RecordPrescription& p) {
  Json j;
  j["patient"] = p.patient;
  j["request"] = p.request.hex();
  j["dose_mg"] = p.dose_mg;
  j["prescription_file"] = p.prescription_file.hex();
  j["decision"] = to_string(p.decision);
  return j;
}

Json payload_body(const EmergencyDoseRequest& p) {
  Json j;
  j["patient"] = p.patient;
  j["request_file"] = p.request_file.hex();
  return j;
}

Json payload_body(const EmergencyDecision& p) {
  Json j;
  j["request_tx"] = p.request_tx.hex();
  j["nurse"] = p.nurse;
  j["approved"] = p.approved;
  j["dose_mg"] = p.dose_mg;
  return j;
}

std::optional<std::string> opt_user(const Json& j, const char* key) { return jf::opt_str(j, key); }

}  // namespace

std::string_view payload_type(const TxPayload& p) {
  return std::visit(overloaded{
                        [](const RequestRegistration&) { return std::string_view("request_registration"); },
                        [](const RegisterUser&) { return std::string_view("register_user"); },
                        [](const StoreFileHash&) { return std::string_view("store_file_hash"); },
                        [](const GrantAccess&) { return std::string_view("grant_access"); },
                        [](const RevokeAccess&) { return std::string_view("revoke_access"); },
                        [](const OpenDoseRequest&) { return std::string_view("open_dose_request"); },
                        [](const RecordPrescription&) { return std::string_view("record_prescription"); },
                        [](const EmergencyDoseRequest&) {
                          return std::string_view("emergency_dose_request");
                        },
                        [](const EmergencyDecision&) { return std::string_view("emergency_decision"); },
                    },
                    p);
}

Json wrapped_key_to_json(const crypto::WrappedKey& w) {
  return Json{{"recipient_id", w.recipient_id}, {"wrapped_bytes", crypto::to_hex(w.wrapped_bytes)}};
}

crypto::WrappedKey wrapped_key_from_json(const Json& j) {
  return crypto::WrappedKey{jf::str(j, "recipient_id"), jf::hex_bytes(j, "wrapped_bytes")};
}

Json suggestion_to_json(const DoseSuggestion& s) {
  Json j;
  j["auto"] = s.auto_approve;
  if (s.dose_mg) j["dose_mg"] = *s.dose_mg;
  if (s.similarity) j["similarity"] = *s.similarity;
  if (s.basis) j["basis"] = s.basis->hex();
  return j;
}

DoseSuggestion suggestion_from_json(const Json& j) {
  DoseSuggestion s;
  s.auto_approve = jf::boolean(j, "auto");
  s.dose_mg = jf::opt_num(j, "dose_mg");
  s.similarity = jf::opt_num(j, "similarity");
  s.basis = jf::opt_digest(j, "basis");
  return s;
}

Json payload_to_json(const TxPayload& p) {
  Json j = std::visit([](const auto& v) { return payload_body(v); }, p);
  j["type"] = payload_type(p);
  return j;
}

TxPayload payload_from_json(const Json& j) {
  const std::string type = jf::str(j, "type");
  if (type == "request_registration") {
    return RequestRegistration{jf::str(j, "user_id"), jf::role(j, "role"),
                               jf::str(j, "display_name"), opt_user(j, "bound_patient")};
  }
  if (type == "register_user") {
    return RegisterUser{jf::str(j, "user_id"),
                        jf::role(j, "role"),
                        jf::str(j, "display_name"),
                        jf::pubkey<crypto::SignPublicKey>(j, "sign_public"),
                        jf::pubkey<crypto::EncPublicKey>(j, "enc_public"),
                        opt_user(j, "bound_patient")};
  }
  if (type == "store_file_hash") {
    StoreFileHash p{jf::digest(j, "content_hash"), jf::digest(j, "plaintext_hash"),
                    jf::kind(j, "kind"), jf::str(j, "owner_patient"), {}};
    const Json& keys = jf::at(j, "wrapped_keys");
    if (!keys.is_array()) throw FormatError("field 'wrapped_keys' must be an array");
    for (const auto& k : keys) p.wrapped_keys.push_back(wrapped_key_from_json(k));
    return p;
  }
  if (type == "grant_access") {
    return GrantAccess{jf::digest(j, "content_hash"), jf::str(j, "grantee"),
                       wrapped_key_from_json(jf::at(j, "wrapped_key"))};
  }
  if (type == "revoke_access") {
    return RevokeAccess{jf::digest(j, "content_hash"), jf::str(j, "grantee")};
  }
  if (type == "open_dose_request") {
    return OpenDoseRequest{jf::str(j, "patient"), jf::digest(j, "request_file"),
                           jf::opt_digest(j, "feature_file"),
                           suggestion_from_json(jf::at(j, "suggestion"))};
  }
  if (type == "record_prescription") {
    auto decision = parse_decision(jf::str(j, "decision"));
    if (!decision) throw FormatError("field 'decision': unknown decision");
    return RecordPrescription{jf::str(j, "patient"), jf::digest(j, "request"),
                              jf::num(j, "dose_mg"), jf::digest(j, "prescription_file"),
                              *decision};
  }
  if (type == "emergency_dose_request") {
    return EmergencyDoseRequest{jf::str(j, "patient"), jf::digest(j, "request_file")};
  }
  if (type == "emergency_decision") {
    return EmergencyDecision{jf::digest(j, "request_tx"), jf::str(j, "nurse"),
                             jf::boolean(j, "approved"), jf::num(j, "dose_mg")};
  }
  throw FormatError("unknown payload type '" + type + "'");
}

std::string signing_bytes(const std::string& author, std::int64_t timestamp_ms,
                          const TxPayload& payload) {
  Json j;
  j["author"] = author;
  j["payload"] = payload_to_json(payload);
  j["timestamp_ms"] = timestamp_ms;
  try {
    return canonical(j);
  } catch (const Json::exception& e) {
    // Raised for strings that are not valid UTF-8.
    throw FormatError(std::string("cannot serialize transaction: ") + e.what());
  }
}

std::string Transaction::signing_bytes() const {
  return careledger::signing_bytes(author, timestamp_ms, payload);
}

Transaction make_signed(const std::string& author, const crypto::SignPrivateKey& key,
                        std::int64_t timestamp_ms, TxPayload payload) {
  Transaction tx;
  tx.author = author;
  tx.timestamp_ms = timestamp_ms;
  tx.payload = std::move(payload);
  const std::string bytes = tx.signing_bytes();
  tx.tx_id = crypto::content_hash(bytes);
  tx.signature = crypto::sign(key, crypto::as_bytes(bytes));
  return tx;
}

Transaction make_unsigned(const std::string& author, std::int64_t timestamp_ms,
                          TxPayload payload) {
  if (!std::holds_alternative<RequestRegistration>(payload)) {
    throw std::invalid_argument("only registration requests may be unsigned");
  }
  Transaction tx;
  tx.author = author;
  tx.timestamp_ms = timestamp_ms;
  tx.payload = std::move(payload);
  tx.tx_id = crypto::content_hash(tx.signing_bytes());
  return tx;
}

Json to_json(const Transaction& tx) {
  Json j;
  j["tx_id"] = tx.tx_id.hex();
  j["author"] = tx.author;
  j["timestamp_ms"] = tx.timestamp_ms;
  j["payload"] = payload_to_json(tx.payload);
  j["signature"] = crypto::to_hex(tx.signature);
  return j;
}

Transaction transaction_from_json(const Json& j) {
  Transaction tx;
  tx.tx_id = jf::digest(j, "tx_id");
  tx.author = jf::str(j, "author");
  tx.timestamp_ms = jf::i64(j, "timestamp_ms");
  tx.payload = payload_from_json(jf::at(j, "payload"));
  tx.signature = jf::hex_bytes(j, "signature");
  if (crypto::content_hash(tx.signing_bytes()) != tx.tx_id) {
    throw FormatError("tx_id does not match the transaction contents");
  }
  return tx;
}

std::int64_t now_ms() {
  using namespace std::chrono;
  return duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count();
}

}  // namespace careledger
