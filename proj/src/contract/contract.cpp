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

#include "careledger/contract/contract.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace careledger::contract {

namespace {

[[noreturn]] void fail(Errc code, const std::string& message) {
  throw ContractError(code, message);
}

std::string mg(double v) {
  std::ostringstream os;
  os << v << " mg";
  return os.str();
}

bool valid_user_id(const std::string& id) {
  if (id.empty() || id.size() > 64) return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
           c == '-' || c == '_' || c == '.';
  });
}

bool valid_dose(double d) { return std::isfinite(d) && d >= 0; }

void check_wrapped(const crypto::WrappedKey& w) {
  if (w.wrapped_bytes.size() != crypto::kWrappedKeySize) {
    fail(Errc::invalid_payload, "wrapped key for '" + w.recipient_id + "' has the wrong length");
  }
}

const FileRecord& require_file(const ContractState& s, const ContentHash& h) {
  auto it = s.files.find(h);
  if (it == s.files.end()) fail(Errc::unknown_file, "unknown file " + h.hex());
  return it->second;
}

void require_patient_file(const ContractState& s, const ContentHash& h, FileKind kind,
                          const std::string& patient, const char* what) {
  const FileRecord& f = require_file(s, h);
  if (f.kind != kind || f.owner_patient != patient) {
    fail(Errc::invalid_payload, std::string(what) + " must be a " + std::string(to_string(kind)) +
                                    " file owned by " + patient);
  }
}

// Who applies the transaction. Returns nullptr for unsigned registration
// requests and for the genesis self-registration.
const UserRecord* authenticate(const ContractState& s, const Transaction& tx,
                               const std::string& signing) {
  const crypto::ByteView msg = crypto::as_bytes(signing);

  if (const auto* req = std::get_if<RequestRegistration>(&tx.payload)) {
    if (!tx.signature.empty()) {
      fail(Errc::invalid_payload, "registration requests are unsigned");
    }
    if (tx.author != req->user_id) {
      fail(Errc::invalid_payload, "a registration request is authored by the requester");
    }
    if (s.users.empty()) fail(Errc::invalid_payload, "ledger has no admin yet");
    return nullptr;
  }

  if (s.users.empty()) {
    const auto* reg = std::get_if<RegisterUser>(&tx.payload);
    if (reg == nullptr || reg->role != Role::admin || reg->user_id != tx.author) {
      fail(Errc::invalid_payload, "the first transaction must be the admin's self-registration");
    }
    if (tx.signature.size() != crypto::kSignatureSize ||
        !crypto::verify(reg->sign_public, msg, tx.signature)) {
      fail(Errc::bad_signature, "bad signature on transaction " + tx.tx_id.hex());
    }
    return nullptr;
  }

  const UserRecord* author = find_active(s, tx.author);
  if (author == nullptr) fail(Errc::unauthenticated, kNotAuthenticated);
  if (tx.signature.size() != crypto::kSignatureSize ||
      !crypto::verify(*author->sign_public, msg, tx.signature)) {
    fail(Errc::bad_signature, "bad signature on transaction " + tx.tx_id.hex());
  }
  return author;
}

void do_request(ContractState& s, const Transaction& tx, const RequestRegistration& p) {
  if (!valid_user_id(p.user_id)) {
    fail(Errc::invalid_payload, "user ids are 1-64 characters of [A-Za-z0-9._-]");
  }
  if (auto it = s.users.find(p.user_id); it != s.users.end()) {
    if (it->second.active()) fail(Errc::already_registered, "user '" + p.user_id + "' is already registered");
    fail(Errc::duplicate_pending, "user '" + p.user_id + "' already has a pending request");
  }
  if (p.role == Role::admin) fail(Errc::forbidden, "admin accounts cannot be requested");
  if (p.role == Role::iot_device) {
    if (!p.bound_patient) fail(Errc::invalid_payload, "an iot_device must name its bound patient");
    const UserRecord* owner = find_active(s, *p.bound_patient);
    if (owner == nullptr || owner->role != Role::patient) {
      fail(Errc::invalid_payload, "bound patient '" + *p.bound_patient + "' is not an active patient");
    }
  } else if (p.bound_patient) {
    fail(Errc::invalid_payload, "only iot_device records carry a bound patient");
  }

  UserRecord u;
  u.user_id = p.user_id;
  u.role = p.role;
  u.display_name = p.display_name;
  u.status = UserStatus::pending;
  u.registered_at_ms = tx.timestamp_ms;
  u.bound_patient = p.bound_patient;
  s.users.emplace(u.user_id, std::move(u));
  s.pending_registrations.push_back(p.user_id);
}

void do_register(ContractState& s, const Transaction& tx, const UserRecord* author,
                 const RegisterUser& p) {
  if (author == nullptr) {
    // Genesis: the admin registers itself.
    UserRecord u;
    u.user_id = p.user_id;
    u.role = Role::admin;
    u.display_name = p.display_name;
    u.sign_public = p.sign_public;
    u.enc_public = p.enc_public;
    u.status = UserStatus::active;
    u.registered_at_ms = tx.timestamp_ms;
    if (!valid_user_id(p.user_id) || p.bound_patient) {
      fail(Errc::invalid_payload, "malformed admin registration");
    }
    s.users.emplace(u.user_id, std::move(u));
    return;
  }

  if (author->role != Role::admin) fail(Errc::not_admin, "only the admin approves registrations");
  auto it = s.users.find(p.user_id);
  if (it == s.users.end()) fail(Errc::unknown_pending, "no pending registration for '" + p.user_id + "'");
  if (it->second.active()) fail(Errc::already_registered, "user '" + p.user_id + "' is already registered");
  const UserRecord& pending = it->second;
  if (pending.role != p.role || pending.display_name != p.display_name ||
      pending.bound_patient != p.bound_patient) {
    fail(Errc::invalid_payload, "approval does not match the pending request");
  }

  UserRecord& u = it->second;
  u.sign_public = p.sign_public;
  u.enc_public = p.enc_public;
  u.status = UserStatus::active;
  u.registered_at_ms = tx.timestamp_ms;
  auto& q = s.pending_registrations;
  q.erase(std::remove(q.begin(), q.end(), p.user_id), q.end());
}

void do_store(ContractState& s, const Transaction& tx, const UserRecord& uploader,
              const StoreFileHash& p) {
  switch (uploader.role) {
    case Role::admin:
    case Role::nurse:
      fail(Errc::forbidden, std::string(to_string(uploader.role)) + " accounts cannot upload files");
    case Role::iot_device:
      if (p.owner_patient != uploader.bound_patient) {
        fail(Errc::device_owner_mismatch, "device '" + uploader.user_id + "' is bound to '" +
                                              uploader.bound_patient.value_or("") + "', not '" +
                                              p.owner_patient + "'");
      }
      if (p.kind != FileKind::motion_capture) {
        fail(Errc::forbidden, "devices only upload motion_capture files");
      }
      break;
    case Role::patient:
      if (p.owner_patient != uploader.user_id) {
        fail(Errc::not_owner, "patients only upload their own files");
      }
      break;
    case Role::physician:
      if (p.kind != FileKind::prescription) {
        fail(Errc::forbidden, "physicians only upload prescription files");
      }
      if (!has_care_relationship(s, uploader.user_id, p.owner_patient)) {
        fail(Errc::no_care_relationship,
             "no care relationship between '" + uploader.user_id + "' and '" + p.owner_patient + "'");
      }
      break;
  }
  const UserRecord* owner = find_active(s, p.owner_patient);
  if (owner == nullptr || owner->role != Role::patient) {
    fail(Errc::invalid_payload, "owner '" + p.owner_patient + "' is not an active patient");
  }
  if (s.files.contains(p.content_hash)) {
    fail(Errc::duplicate_hash, "file " + p.content_hash.hex() + " is already recorded");
  }
  if (p.content_hash == p.plaintext_hash) {
    fail(Errc::invalid_payload, "content hash equals plaintext hash; the file is not encrypted");
  }

  std::map<std::string, crypto::WrappedKey> keys;
  for (const auto& w : p.wrapped_keys) {
    check_wrapped(w);
    const UserRecord* r = find_active(s, w.recipient_id);
    if (r == nullptr) fail(Errc::unknown_grantee, "recipient '" + w.recipient_id + "' is not an active user");
    const bool is_owner = w.recipient_id == p.owner_patient;
    bool allowed = false;
    if (uploader.role == Role::patient) {
      allowed = is_owner || r->role == Role::physician || r->role == Role::nurse;
    } else if (uploader.role == Role::physician) {
      allowed = is_owner || w.recipient_id == uploader.user_id;
    } else {
      allowed = is_owner;
    }
    if (!allowed) {
      fail(Errc::forbidden, "cannot wrap a key for '" + w.recipient_id + "' on this upload");
    }
    if (!keys.emplace(w.recipient_id, w).second) {
      fail(Errc::invalid_payload, "duplicate wrapped key for '" + w.recipient_id + "'");
    }
  }
  if (!keys.contains(p.owner_patient)) {
    fail(Errc::invalid_payload, "the owner must receive a wrapped key");
  }

  FileRecord f;
  f.content_hash = p.content_hash;
  f.plaintext_hash = p.plaintext_hash;
  f.owner_patient = p.owner_patient;
  f.uploader = uploader.user_id;
  f.kind = p.kind;
  f.created_at_ms = tx.timestamp_ms;
  f.wrapped_keys = std::move(keys);
  s.files.emplace(p.content_hash, std::move(f));
}

void do_grant(ContractState& s, const UserRecord& author, const GrantAccess& p) {
  const FileRecord& f = require_file(s, p.content_hash);
  if (f.owner_patient != author.user_id) fail(Errc::not_owner, "only the owning patient may share a file");
  const UserRecord* g = find_active(s, p.grantee);
  if (g == nullptr) fail(Errc::unknown_grantee, "grantee '" + p.grantee + "' is not an active user");
  if (g->role != Role::physician && g->role != Role::nurse) {
    fail(Errc::forbidden, "files can only be shared with physicians and nurses");
  }
  if (p.wrapped_key.recipient_id != p.grantee) {
    fail(Errc::invalid_payload, "wrapped key recipient does not match the grantee");
  }
  check_wrapped(p.wrapped_key);

  FileRecord& m = s.files.at(p.content_hash);
  m.wrapped_keys[p.grantee] = p.wrapped_key;
  m.revoked.erase(p.grantee);
}

void do_revoke(ContractState& s, const UserRecord& author, const RevokeAccess& p) {
  const FileRecord& f = require_file(s, p.content_hash);
  if (f.owner_patient != author.user_id) fail(Errc::not_owner, "only the owning patient may revoke access");
  if (p.grantee == f.owner_patient) fail(Errc::forbidden, "the owner's own access cannot be revoked");
  if (!f.wrapped_keys.contains(p.grantee)) {
    fail(Errc::unknown_grantee, "'" + p.grantee + "' holds no key for this file");
  }
  if (f.revoked.contains(p.grantee)) {
    fail(Errc::invalid_payload, "access for '" + p.grantee + "' is already revoked");
  }
  s.files.at(p.content_hash).revoked.insert(p.grantee);
}

void require_self_patient(const UserRecord& author, const std::string& patient) {
  if (author.role != Role::patient) fail(Errc::forbidden, "only patients open dose requests");
  if (author.user_id != patient) fail(Errc::not_owner, "patients open requests for themselves only");
}

void do_open_request(ContractState& s, const Transaction& tx, const UserRecord& author,
                     const OpenDoseRequest& p) {
  require_self_patient(author, p.patient);
  require_patient_file(s, p.request_file, FileKind::dose_request, p.patient, "request_file");
  if (p.feature_file) {
    require_patient_file(s, *p.feature_file, FileKind::motion_capture, p.patient, "feature_file");
  }
  const DoseSuggestion& sg = p.suggestion;
  if ((sg.dose_mg && !valid_dose(*sg.dose_mg)) ||
      (sg.similarity && !(std::isfinite(*sg.similarity) && *sg.similarity >= 0))) {
    fail(Errc::invalid_payload, "suggestion values must be finite and non-negative");
  }
  if (!sg.similarity && (sg.dose_mg || sg.auto_approve || sg.basis)) {
    fail(Errc::invalid_payload, "a suggestion without a comparison carries no dose");
  }
  if (sg.auto_approve) {
    auto last = s.last_approved_dose.find(p.patient);
    if (!sg.dose_mg || last == s.last_approved_dose.end() || *sg.dose_mg != last->second) {
      fail(Errc::invalid_payload, "an automatic suggestion must repeat the last approved dose");
    }
  }

  DoseRequest r;
  r.id = tx.tx_id;
  r.patient_id = p.patient;
  r.kind = DoseRequestKind::routine;
  r.created_at_ms = tx.timestamp_ms;
  r.request_file = p.request_file;
  r.feature_file = p.feature_file;
  r.suggestion = p.suggestion;
  r.status = DoseRequestStatus::pending_physician;
  s.dose_requests.emplace(r.id, std::move(r));
}

void do_prescribe(ContractState& s, const Transaction& tx, const UserRecord& author,
                  const RecordPrescription& p) {
  auto it = s.dose_requests.find(p.request);
  if (it == s.dose_requests.end()) fail(Errc::unknown_request, "unknown dose request " + p.request.hex());
  const DoseRequest& r = it->second;
  if (r.patient_id != p.patient) fail(Errc::invalid_payload, "request belongs to another patient");
  if (r.kind != DoseRequestKind::routine || r.status != DoseRequestStatus::pending_physician) {
    fail(Errc::bad_status, "request " + p.request.hex() + " is " + std::string(to_string(r.status)));
  }
  if (!valid_dose(p.dose_mg)) fail(Errc::invalid_payload, "dose must be finite and non-negative");

  DoseRequestStatus next;
  if (p.decision == Decision::automatic) {
    require_self_patient(author, p.patient);
    auto last = s.last_approved_dose.find(p.patient);
    if (!r.suggestion.auto_approve || r.suggestion.dose_mg != p.dose_mg ||
        last == s.last_approved_dose.end() || last->second != p.dose_mg) {
      fail(Errc::invalid_payload, "automatic approval only repeats an automatic suggestion");
    }
    next = DoseRequestStatus::auto_approved;
  } else {
    if (author.role != Role::physician) fail(Errc::forbidden, "only physicians prescribe");
    if (!has_care_relationship(s, author.user_id, p.patient)) {
      fail(Errc::no_care_relationship,
           "no care relationship between '" + author.user_id + "' and '" + p.patient + "'");
    }
    if (p.decision == Decision::confirmed) {
      if (r.suggestion.dose_mg != p.dose_mg) {
        fail(Errc::invalid_payload, "a confirmation must prescribe the suggested dose");
      }
      next = DoseRequestStatus::physician_confirmed;
    } else {
      next = DoseRequestStatus::physician_overridden;
    }
  }
  require_patient_file(s, p.prescription_file, FileKind::prescription, p.patient,
                       "prescription_file");

  DoseRequest& m = it->second;
  m.status = next;
  m.decided_by = author.user_id;
  m.decided_at_ms = tx.timestamp_ms;
  m.decided_dose_mg = p.dose_mg;
  m.prescription_file = p.prescription_file;
  s.last_approved_dose[p.patient] = p.dose_mg;
}

void do_emergency(ContractState& s, const Transaction& tx, const UserRecord& author,
                  const EmergencyDoseRequest& p) {
  require_self_patient(author, p.patient);
  require_patient_file(s, p.request_file, FileKind::dose_request, p.patient, "request_file");
  auto last = s.last_approved_dose.find(p.patient);
  if (last == s.last_approved_dose.end()) {
    fail(Errc::no_cap, "no approved dose on record for '" + p.patient + "'");
  }

  DoseRequest r;
  r.id = tx.tx_id;
  r.patient_id = p.patient;
  r.kind = DoseRequestKind::emergency;
  r.created_at_ms = tx.timestamp_ms;
  r.request_file = p.request_file;
  r.status = DoseRequestStatus::emergency_pending;
  s.dose_requests.emplace(r.id, std::move(r));
}

void do_decide(ContractState& s, const Transaction& tx, const UserRecord& author,
               const EmergencyDecision& p) {
  if (author.role != Role::nurse) fail(Errc::forbidden, "only nurses decide emergency requests");
  if (p.nurse != author.user_id) fail(Errc::invalid_payload, "decision must name its author");
  auto it = s.dose_requests.find(p.request_tx);
  if (it == s.dose_requests.end()) {
    fail(Errc::unknown_request, "unknown emergency request " + p.request_tx.hex());
  }
  const DoseRequest& r = it->second;
  if (r.kind != DoseRequestKind::emergency || r.status != DoseRequestStatus::emergency_pending) {
    fail(Errc::bad_status, "request " + p.request_tx.hex() + " is " + std::string(to_string(r.status)));
  }
  if (!valid_dose(p.dose_mg)) fail(Errc::invalid_payload, "dose must be finite and non-negative");
  const double cap = s.last_approved_dose.at(r.patient_id);
  if (p.approved) {
    if (p.dose_mg <= 0) fail(Errc::invalid_payload, "an approval must grant a positive dose");
    if (p.dose_mg > cap) {
      fail(Errc::dose_exceeds_cap, "dose " + mg(p.dose_mg) + " exceeds the cap of " + mg(cap));
    }
  } else if (p.dose_mg != 0) {
    fail(Errc::invalid_payload, "a denial carries a dose of 0");
  }

  DoseRequest& m = it->second;
  m.status = DoseRequestStatus::emergency_decided;
  m.decided_by = author.user_id;
  m.decided_at_ms = tx.timestamp_ms;
  m.decided_dose_mg = p.dose_mg;
  m.approved = p.approved;
  m.cap_mg = cap;
  if (p.approved) s.last_approved_dose[r.patient_id] = p.dose_mg;
}

}  // namespace

std::string_view to_string(Errc e) {
  switch (e) {
    case Errc::already_registered: return "AlreadyRegistered";
    case Errc::duplicate_pending: return "DuplicatePending";
    case Errc::not_admin: return "NotAdmin";
    case Errc::unknown_pending: return "UnknownPending";
    case Errc::unauthenticated: return "Unauthenticated";
    case Errc::bad_signature: return "BadSignature";
    case Errc::duplicate_hash: return "DuplicateHash";
    case Errc::device_owner_mismatch: return "DeviceOwnerMismatch";
    case Errc::not_owner: return "NotOwner";
    case Errc::unknown_file: return "UnknownFile";
    case Errc::unknown_grantee: return "UnknownGrantee";
    case Errc::no_care_relationship: return "NoCareRelationship";
    case Errc::bad_status: return "BadStatus";
    case Errc::no_cap: return "NoCap";
    case Errc::dose_exceeds_cap: return "DoseExceedsCap";
    case Errc::unknown_request: return "UnknownRequest";
    case Errc::forbidden: return "Forbidden";
    case Errc::invalid_payload: return "InvalidPayload";
    case Errc::duplicate_tx: return "DuplicateTransaction";
    case Errc::policy: return "PolicyViolation";
  }
  return "Unknown";
}

std::optional<Errc> parse_errc(std::string_view name) {
  for (int i = 0; i <= static_cast<int>(Errc::policy); ++i) {
    if (to_string(static_cast<Errc>(i)) == name) return static_cast<Errc>(i);
  }
  return std::nullopt;
}

void apply_in_place(ContractState& s, const Transaction& tx) {
  const std::string signing = tx.signing_bytes();
  if (crypto::content_hash(signing) != tx.tx_id) {
    fail(Errc::invalid_payload, "tx_id does not match the transaction contents");
  }
  if (s.applied.contains(tx.tx_id)) {
    fail(Errc::duplicate_tx, "transaction " + tx.tx_id.hex() + " was already applied");
  }
  const UserRecord* author = authenticate(s, tx, signing);

  // Handlers validate fully before their first mutation. The applied-set
  // insert comes last so a rejected tx leaves no trace.
  std::visit(
      [&](const auto& p) {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, RequestRegistration>) {
          do_request(s, tx, p);
        } else if constexpr (std::is_same_v<P, RegisterUser>) {
          do_register(s, tx, author, p);
        } else if constexpr (std::is_same_v<P, StoreFileHash>) {
          do_store(s, tx, *author, p);
        } else if constexpr (std::is_same_v<P, GrantAccess>) {
          do_grant(s, *author, p);
        } else if constexpr (std::is_same_v<P, RevokeAccess>) {
          do_revoke(s, *author, p);
        } else if constexpr (std::is_same_v<P, OpenDoseRequest>) {
          do_open_request(s, tx, *author, p);
        } else if constexpr (std::is_same_v<P, RecordPrescription>) {
          do_prescribe(s, tx, *author, p);
        } else if constexpr (std::is_same_v<P, EmergencyDoseRequest>) {
          do_emergency(s, tx, *author, p);
        } else {
          do_decide(s, tx, *author, p);
        }
      },
      tx.payload);
  s.applied.insert(tx.tx_id);
}

ContractState apply(const ContractState& state, const Transaction& tx) {
  ContractState next = state;
  apply_in_place(next, tx);
  return next;
}

const UserRecord* find_active(const ContractState& s, const std::string& user_id) {
  auto it = s.users.find(user_id);
  if (it == s.users.end() || !it->second.active()) return nullptr;
  return &it->second;
}

bool has_care_relationship(const ContractState& s, const std::string& physician,
                           const std::string& patient) {
  for (const auto& [h, f] : s.files) {
    if (f.owner_patient == patient && f.key_live_for(physician)) return true;
  }
  return false;
}

bool has_open_emergency(const ContractState& s, const std::string& patient) {
  for (const auto& [id, r] : s.dose_requests) {
    if (r.patient_id == patient && r.status == DoseRequestStatus::emergency_pending) return true;
  }
  return false;
}

std::vector<std::string> patients_of(const ContractState& s, const std::string& physician) {
  std::set<std::string> out;
  for (const auto& [h, f] : s.files) {
    if (f.owner_patient != physician && f.key_live_for(physician)) out.insert(f.owner_patient);
  }
  return {out.begin(), out.end()};
}

bool may_write(const ContractState& s, const UserRecord& user, FileKind kind,
               const std::string& owner) {
  if (!user.active()) return false;
  switch (user.role) {
    case Role::patient: return owner == user.user_id;
    case Role::physician:
      return kind == FileKind::prescription && has_care_relationship(s, user.user_id, owner);
    case Role::iot_device:
      return kind == FileKind::motion_capture && user.bound_patient == owner;
    case Role::nurse:
    case Role::admin: return false;
  }
  return false;
}

FetchDecision authorize_fetch(const ContractState& s, const std::string& user_id,
                              const ContentHash& content_hash) {
  const UserRecord* u = find_active(s, user_id);
  if (u == nullptr) return Deny{kUserNotValid};
  auto it = s.files.find(content_hash);
  if (it == s.files.end()) return Deny{"Unknown file"};
  const FileRecord& f = it->second;

  if (u->role == Role::admin || u->role == Role::iot_device) {
    return Deny{std::string(to_string(u->role)) + " accounts have no read access"};
  }
  auto key = f.wrapped_keys.find(user_id);
  if (key == f.wrapped_keys.end()) return Deny{kUserNotValid};
  if (f.revoked.contains(user_id)) return Deny{"Access to this file has been revoked"};

  switch (u->role) {
    case Role::patient:
      if (f.owner_patient != user_id) return Deny{"Patients may only read their own files"};
      break;
    case Role::physician:
      if (!has_care_relationship(s, user_id, f.owner_patient)) {
        return Deny{"No care relationship with this patient"};
      }
      break;
    case Role::nurse:
      if (f.kind != FileKind::dose_request && f.kind != FileKind::prescription) {
        return Deny{"Nurse access level excludes " + std::string(to_string(f.kind)) + " files"};
      }
      if (!has_open_emergency(s, f.owner_patient)) {
        return Deny{"No open emergency request for this patient"};
      }
      break;
    case Role::iot_device:
    case Role::admin: break;
  }
  return Allow{key->second};
}

IntegrityReport check_integrity(const ContractState& s, const ContentHash& content_hash,
                                crypto::ByteView fetched_ciphertext,
                                std::optional<crypto::ByteView> decrypted_plaintext) {
  const FileRecord& f = require_file(s, content_hash);
  IntegrityReport r;
  r.store_level = crypto::content_hash(fetched_ciphertext) == f.content_hash;
  if (decrypted_plaintext) {
    r.end_to_end = crypto::content_hash(*decrypted_plaintext) == f.plaintext_hash;
  }
  return r;
}

std::vector<UserRecord> list_physicians(const ContractState& s) {
  std::vector<UserRecord> out;
  for (const auto& [id, u] : s.users) {  // std::map: already sorted by id
    if (u.role == Role::physician && u.active()) out.push_back(u);
  }
  return out;
}

}  // namespace careledger::contract
