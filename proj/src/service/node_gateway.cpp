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

#include "careledger/service/node_gateway.hpp"

#include "careledger/careflow/errors.hpp"

namespace careledger::service {

using careflow::AccessDenied;
using careflow::IntegrityError;
using contract::ContractError;
using contract::Errc;

bool file_visible(const contract::FileRecord& f, const std::string& viewer) {
  return f.owner_patient == viewer || f.uploader == viewer || f.wrapped_keys.contains(viewer);
}

bool dose_request_visible(const contract::ContractState& s, const contract::DoseRequest& r,
                          const std::string& viewer) {
  const contract::UserRecord* u = contract::find_active(s, viewer);
  if (u == nullptr) return false;
  switch (u->role) {
    case Role::patient: return r.patient_id == viewer;
    case Role::physician: return contract::has_care_relationship(s, viewer, r.patient_id);
    case Role::nurse: return r.kind == DoseRequestKind::emergency;
    default: return false;
  }
}

namespace {

const contract::UserRecord& require_viewer(const contract::ContractState& s,
                                           const std::string& viewer) {
  const contract::UserRecord* u = contract::find_active(s, viewer);
  if (u == nullptr) throw ContractError(Errc::unauthenticated, contract::kNotAuthenticated);
  return *u;
}

}  // namespace

careflow::NodeStatus NodeGateway::status() {
  const auto snap = node_.snapshot();
  return careflow::NodeStatus{snap->height, snap->tip_hash, node_.config().tau,
                              node_.config().max_consecutive_auto};
}

careflow::Receipt NodeGateway::submit(const Transaction& tx) {
  if (tx.author != viewer_) throw AccessDenied("transaction author does not match the session");
  return node_.submit(tx);
}

careflow::Receipt NodeGateway::submit_file(crypto::ByteView sealed_blob,
                                           const Transaction& store_tx) {
  if (store_tx.author != viewer_) {
    throw AccessDenied("transaction author does not match the session");
  }
  return node_.submit_file(sealed_blob, store_tx);
}

std::optional<contract::UserRecord> NodeGateway::user(const std::string& user_id) {
  const auto snap = node_.snapshot();
  const contract::UserRecord* u = contract::find_active(snap->state, user_id);
  if (u == nullptr) return std::nullopt;
  return *u;
}

std::vector<contract::UserRecord> NodeGateway::users(std::optional<Role> role) {
  const auto snap = node_.snapshot();
  std::vector<contract::UserRecord> out;
  for (const auto& [_, u] : snap->state.users) {
    if (u.active() && (!role || u.role == *role)) out.push_back(u);
  }
  return out;
}

std::vector<contract::UserRecord> NodeGateway::pending() {
  const auto snap = node_.snapshot();
  if (require_viewer(snap->state, viewer_).role != Role::admin) {
    throw AccessDenied("only the admin sees pending registrations");
  }
  std::vector<contract::UserRecord> out;
  for (const auto& id : snap->state.pending_registrations) out.push_back(snap->state.users.at(id));
  return out;
}

std::optional<contract::FileRecord> NodeGateway::file(const ContentHash& h) {
  const auto snap = node_.snapshot();
  auto it = snap->state.files.find(h);
  if (it == snap->state.files.end() || !file_visible(it->second, viewer_)) return std::nullopt;
  return it->second;
}

std::vector<contract::FileRecord> NodeGateway::files(std::optional<std::string> patient) {
  const auto snap = node_.snapshot();
  std::vector<contract::FileRecord> out;
  for (const auto& [_, f] : snap->state.files) {
    if (file_visible(f, viewer_) && (!patient || f.owner_patient == *patient)) out.push_back(f);
  }
  return out;
}

contract::FetchDecision NodeGateway::file_key(const ContentHash& h) {
  return contract::authorize_fetch(node_.snapshot()->state, viewer_, h);
}

crypto::Bytes NodeGateway::open_file(const ContentHash& h, const crypto::FileKey& key) {
  const auto snap = node_.snapshot();
  const contract::FetchDecision d = contract::authorize_fetch(snap->state, viewer_, h);
  if (const auto* deny = std::get_if<contract::Deny>(&d)) throw AccessDenied(deny->reason);
  const contract::FileRecord& rec = snap->state.files.at(h);

  crypto::Bytes wire;
  try {
    wire = node_.store().read_raw(h);
  } catch (const castore::StoreError& e) {
    throw IntegrityError(contract::IntegrityReport{}, std::string("blob unavailable: ") + e.what());
  }
  contract::IntegrityReport report = contract::check_integrity(snap->state, h, wire, std::nullopt);
  if (!report.store_level) {
    throw IntegrityError(report, "stored ciphertext does not match the ledger hash");
  }
  crypto::Bytes plaintext = crypto::aead_open(key, crypto::SealedBlob::parse(wire),
                                              crypto::as_bytes(rec.owner_patient));
  report = contract::check_integrity(snap->state, h, wire, crypto::ByteView(plaintext));
  if (!report.ok()) {
    throw IntegrityError(report, "decrypted bytes do not match the ledger hash");
  }
  return plaintext;
}

contract::IntegrityReport NodeGateway::integrity(const ContentHash& h,
                                                 const std::optional<crypto::FileKey>& key) {
  const auto snap = node_.snapshot();
  auto it = snap->state.files.find(h);
  if (it == snap->state.files.end() || !file_visible(it->second, viewer_)) {
    throw ContractError(Errc::unknown_file, "unknown file " + h.hex());
  }
  crypto::Bytes wire;
  try {
    wire = node_.store().read_raw(h);
  } catch (const castore::StoreError&) {
    contract::IntegrityReport missing;
    if (key) missing.end_to_end = false;
    return missing;
  }
  std::optional<crypto::Bytes> plaintext;
  if (key) {
    try {
      plaintext = crypto::aead_open(*key, crypto::SealedBlob::parse(wire),
                                    crypto::as_bytes(it->second.owner_patient));
    } catch (const std::exception&) {
      contract::IntegrityReport r = contract::check_integrity(snap->state, h, wire, std::nullopt);
      r.end_to_end = false;
      return r;
    }
  }
  std::optional<crypto::ByteView> view;
  if (plaintext) view = crypto::ByteView(*plaintext);
  return contract::check_integrity(snap->state, h, wire, view);
}

std::vector<contract::DoseRequest> NodeGateway::dose_requests(std::optional<std::string> patient) {
  const auto snap = node_.snapshot();
  const Role role = require_viewer(snap->state, viewer_).role;
  if (role == Role::admin || role == Role::iot_device) {
    throw AccessDenied(std::string(to_string(role)) + " accounts have no access to dose requests");
  }
  std::vector<contract::DoseRequest> out;
  for (const auto& [_, r] : snap->state.dose_requests) {
    if ((!patient || r.patient_id == *patient) && dose_request_visible(snap->state, r, viewer_)) {
      out.push_back(r);
    }
  }
  return out;
}

std::optional<double> NodeGateway::last_approved_dose(const std::string& patient) {
  const auto snap = node_.snapshot();
  const contract::UserRecord& me = require_viewer(snap->state, viewer_);
  const bool allowed = (me.role == Role::patient && patient == viewer_) || me.role == Role::nurse ||
                       (me.role == Role::physician &&
                        contract::has_care_relationship(snap->state, viewer_, patient));
  if (!allowed) throw AccessDenied("no access to the dose record of '" + patient + "'");
  auto it = snap->state.last_approved_dose.find(patient);
  if (it == snap->state.last_approved_dose.end()) return std::nullopt;
  return it->second;
}

ledger::ChainReport NodeGateway::verify_chain() { return node_.verify_chain(); }

}  // namespace careledger::service
