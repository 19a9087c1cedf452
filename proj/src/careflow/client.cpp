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

#include "careledger/careflow/client.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace careledger::careflow {

using contract::ContractError;
using contract::Errc;

namespace {

bool approved_routine(const contract::DoseRequest& r) {
  return r.kind == DoseRequestKind::routine && r.decided_dose_mg &&
         (r.status == DoseRequestStatus::auto_approved ||
          r.status == DoseRequestStatus::physician_confirmed ||
          r.status == DoseRequestStatus::physician_overridden);
}

// Routine decisions, oldest first by decision time.
std::vector<contract::DoseRequest> decided_routine(std::vector<contract::DoseRequest> all) {
  std::erase_if(all, [](const auto& r) { return !approved_routine(r); });
  std::stable_sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
    return a.decided_at_ms.value_or(0) < b.decided_at_ms.value_or(0);
  });
  return all;
}

}  // namespace

Transaction registration_request(const std::string& user_id, Role role,
                                 const std::string& display_name,
                                 std::optional<std::string> bound_patient,
                                 std::int64_t timestamp_ms) {
  return make_unsigned(user_id, timestamp_ms,
                       RequestRegistration{user_id, role, display_name, std::move(bound_patient)});
}

CareClient::CareClient(Gateway& gateway, crypto::KeyPair me, Clock clock)
    : gateway_(gateway), me_(std::move(me)), clock_(std::move(clock)) {}

Transaction CareClient::sign(TxPayload payload) {
  return make_signed(me_.user_id, me_.sign_private, clock_(), std::move(payload));
}

contract::UserRecord CareClient::self() {
  if (!self_) {
    auto u = gateway_.user(me_.user_id);
    if (!u || !u->active()) throw ContractError(Errc::unauthenticated, contract::kNotAuthenticated);
    self_ = std::move(u);
  }
  return *self_;
}

crypto::KeyPair CareClient::approve_registration(const std::string& user_id) {
  std::optional<contract::UserRecord> pending;
  for (auto& u : gateway_.pending()) {
    if (u.user_id == user_id) pending = std::move(u);
  }
  if (!pending) {
    throw ContractError(Errc::unknown_pending, "no pending registration for '" + user_id + "'");
  }
  crypto::KeyPair kp = crypto::generate_keypair(user_id);
  gateway_.submit(sign(RegisterUser{user_id, pending->role, pending->display_name, kp.sign_public,
                                    kp.enc_public, pending->bound_patient}));
  return kp;
}

ContentHash CareClient::upload_file(crypto::ByteView plaintext, FileKind kind,
                                    const std::string& owner_patient,
                                    const std::vector<std::string>& extra_recipients) {
  std::vector<std::string> recipients{owner_patient};
  const contract::UserRecord me = self();
  if (me.user_id != owner_patient && me.role != Role::iot_device) recipients.push_back(me.user_id);
  for (const auto& r : extra_recipients) {
    if (std::find(recipients.begin(), recipients.end(), r) == recipients.end()) {
      recipients.push_back(r);
    }
  }

  const Digest plaintext_hash = crypto::content_hash(plaintext);
  const crypto::FileKey key = crypto::generate_file_key();
  const crypto::Bytes wire =
      crypto::aead_seal(key, plaintext, crypto::as_bytes(owner_patient)).serialize();
  const ContentHash address = crypto::content_hash(wire);

  StoreFileHash p{address, plaintext_hash, kind, owner_patient, {}};
  for (const auto& id : recipients) {
    auto u = gateway_.user(id);
    if (!u || !u->active() || !u->enc_public) {
      throw ContractError(Errc::unknown_grantee, "no active user '" + id + "' to wrap a key for");
    }
    p.wrapped_keys.push_back(crypto::wrap_file_key(id, *u->enc_public, key));
  }
  gateway_.submit_file(wire, sign(std::move(p)));
  return address;
}

crypto::FileKey CareClient::unwrap_for_me(const ContentHash& h) {
  contract::FetchDecision d = gateway_.file_key(h);
  if (const auto* deny = std::get_if<contract::Deny>(&d)) throw AccessDenied(deny->reason);
  return crypto::unwrap_file_key(me_.enc_private, std::get<contract::Allow>(d).wrapped_key);
}

crypto::Bytes CareClient::fetch_file(const ContentHash& h) {
  return gateway_.open_file(h, unwrap_for_me(h));
}

Receipt CareClient::share_file(const ContentHash& h, const std::string& grantee) {
  auto f = gateway_.file(h);
  if (!f) throw ContractError(Errc::unknown_file, "unknown file " + h.hex());
  if (f->owner_patient != me_.user_id) {
    throw ContractError(Errc::not_owner, "only the owner shares " + h.hex());
  }
  auto g = gateway_.user(grantee);
  if (!g || !g->active() || !g->enc_public) {
    throw ContractError(Errc::unknown_grantee, "no active user '" + grantee + "'");
  }
  const crypto::FileKey key = unwrap_for_me(h);
  return gateway_.submit(
      sign(GrantAccess{h, grantee, crypto::wrap_file_key(grantee, *g->enc_public, key)}));
}

Receipt CareClient::revoke(const ContentHash& h, const std::string& grantee) {
  return gateway_.submit(sign(RevokeAccess{h, grantee}));
}

contract::IntegrityReport CareClient::check_integrity(const ContentHash& h) {
  std::optional<crypto::FileKey> key;
  try {
    key = unwrap_for_me(h);
  } catch (const AccessDenied&) {
  }
  return gateway_.integrity(h, key);
}

std::vector<contract::UserRecord> CareClient::physicians() {
  return gateway_.users(Role::physician);
}

ContentHash CareClient::ingest_motion(const MotionCapture& mc) {
  validate(mc);
  const contract::UserRecord me = self();
  if (me.role != Role::iot_device) {
    throw ContractError(Errc::forbidden, "only iot_device accounts ingest motion data");
  }
  if (mc.device_id != me.user_id) {
    throw ValidationError("motion capture: device_id '" + mc.device_id + "' is not this device");
  }
  if (mc.patient_id != me.bound_patient) {
    throw ContractError(Errc::device_owner_mismatch,
                        "device '" + me.user_id + "' is bound to '" +
                            me.bound_patient.value_or("") + "', not '" + mc.patient_id + "'");
  }
  const std::string bytes = serialize_motion(mc);
  return upload_file(crypto::as_bytes(bytes), FileKind::motion_capture, mc.patient_id);
}

std::vector<std::string> CareClient::care_team(const std::string& patient) {
  std::set<std::string> physicians;
  for (const auto& u : gateway_.users(Role::physician)) physicians.insert(u.user_id);
  std::set<std::string> team;
  for (const auto& f : gateway_.files(patient)) {
    if (f.owner_patient != patient) continue;
    for (const auto& [id, _] : f.wrapped_keys) {
      if (physicians.contains(id) && f.key_live_for(id)) team.insert(id);
    }
  }
  return {team.begin(), team.end()};
}

ContentHash CareClient::upload_document(const std::string& doc, FileKind kind,
                                        const std::string& owner,
                                        const std::vector<std::string>& extra) {
  return upload_file(crypto::as_bytes(doc), kind, owner, extra);
}

std::vector<HistoryEntry> CareClient::dose_history(const std::string& patient) {
  std::vector<HistoryEntry> history;
  for (const auto& r : decided_routine(gateway_.dose_requests(patient))) {
    const crypto::Bytes raw = fetch_file(r.request_file);
    const RequestDocument doc = parse_request_document(crypto::as_chars(raw));
    if (!doc.features) continue;
    history.push_back(
        HistoryEntry{*doc.features, *r.decided_dose_mg, true, r.request_file, *r.decided_at_ms});
  }
  return history;
}

DoseOutcome CareClient::request_dose(const std::optional<ContentHash>& motion_file,
                                     const std::string& note) {
  const contract::UserRecord me = self();
  if (me.role != Role::patient) {
    throw ContractError(Errc::forbidden, "only patients open dose requests");
  }

  std::optional<FeatureVector> features;
  if (motion_file) {
    const crypto::Bytes raw = fetch_file(*motion_file);
    const MotionCapture mc = parse_motion(crypto::as_chars(raw));
    if (mc.patient_id != me.user_id) {
      throw ValidationError("motion capture belongs to '" + mc.patient_id + "'");
    }
    features = extract_features(mc);
  }

  DoseSuggestion suggestion;
  if (features) {
    const NodeStatus st = gateway_.status();
    const DecisionPolicy policy{st.tau, st.max_consecutive_auto};
    suggestion = suggest_dose(dose_history(me.user_id), *features, policy);
    if (suggestion.auto_approve) {
      // An emergency approval since the matched episode moved the dose on
      // record; only a physician may go back to the older dose.
      const auto last = gateway_.last_approved_dose(me.user_id);
      if (!last || *last != *suggestion.dose_mg) suggestion.auto_approve = false;
    }
    if (suggestion.auto_approve && policy.max_consecutive_auto > 0) {
      const auto decided = decided_routine(gateway_.dose_requests(me.user_id));
      std::uint32_t run = 0;
      for (auto it = decided.rbegin();
           it != decided.rend() && it->status == DoseRequestStatus::auto_approved; ++it) {
        ++run;
      }
      if (run >= policy.max_consecutive_auto) suggestion.auto_approve = false;
    }
  }

  const std::vector<std::string> team = care_team(me.user_id);
  const RequestDocument doc{me.user_id, DoseRequestKind::routine, clock_(), motion_file,
                            features,  suggestion,               note};
  const ContentHash request_file =
      upload_document(serialize(doc), FileKind::dose_request, me.user_id, team);
  const Receipt opened =
      gateway_.submit(sign(OpenDoseRequest{me.user_id, request_file, motion_file, suggestion}));

  DoseOutcome out{opened.tx_id, suggestion, DoseRequestStatus::pending_physician, std::nullopt};
  if (suggestion.auto_approve) {
    const PrescriptionDocument rx{me.user_id, opened.tx_id, *suggestion.dose_mg,
                                  Decision::automatic, me.user_id, clock_()};
    const ContentHash rx_file =
        upload_document(serialize(rx), FileKind::prescription, me.user_id, team);
    gateway_.submit(sign(RecordPrescription{me.user_id, opened.tx_id, *suggestion.dose_mg,
                                            rx_file, Decision::automatic}));
    out.status = DoseRequestStatus::auto_approved;
    out.prescription_file = rx_file;
  }
  return out;
}

contract::DoseRequest CareClient::find_request(const TxId& id) {
  for (auto& r : gateway_.dose_requests(std::nullopt)) {
    if (r.id == id) return r;
  }
  throw ContractError(Errc::unknown_request, "unknown dose request " + id.hex());
}

ContentHash CareClient::prescribe(const TxId& request, Decision decision,
                                  std::optional<double> dose_mg) {
  if (decision == Decision::automatic) {
    throw ContractError(Errc::forbidden, "physicians confirm or override");
  }
  const contract::DoseRequest r = find_request(request);
  if (r.kind != DoseRequestKind::routine || r.status != DoseRequestStatus::pending_physician) {
    throw ContractError(Errc::bad_status, "request " + request.hex() + " is " +
                                              std::string(to_string(r.status)));
  }
  if (decision == Decision::confirmed) {
    if (!r.suggestion.dose_mg) throw ValidationError("no suggested dose to confirm");
    if (!dose_mg) dose_mg = r.suggestion.dose_mg;
  }
  if (!dose_mg || !std::isfinite(*dose_mg) || *dose_mg < 0) {
    throw ValidationError("an override needs a non-negative dose");
  }

  const PrescriptionDocument rx{r.patient_id, request, *dose_mg, decision, me_.user_id, clock_()};
  const ContentHash rx_file = upload_document(serialize(rx), FileKind::prescription, r.patient_id, {});
  gateway_.submit(sign(RecordPrescription{r.patient_id, request, *dose_mg, rx_file, decision}));
  return rx_file;
}

EmergencyOutcome CareClient::emergency_request(const std::string& note) {
  const contract::UserRecord me = self();
  if (me.role != Role::patient) {
    throw ContractError(Errc::forbidden, "only patients raise emergency requests");
  }
  std::vector<std::string> readers = care_team(me.user_id);
  for (const auto& n : gateway_.users(Role::nurse)) readers.push_back(n.user_id);

  const RequestDocument doc{me.user_id, DoseRequestKind::emergency, clock_(), std::nullopt,
                            std::nullopt, DoseSuggestion{},          note};
  const ContentHash request_file =
      upload_document(serialize(doc), FileKind::dose_request, me.user_id, readers);

  if (const auto cap = gateway_.last_approved_dose(me.user_id)) {
    try {
      const Receipt r = gateway_.submit(sign(EmergencyDoseRequest{me.user_id, request_file}));
      return EmergencyOutcome{r.tx_id, false, cap};
    } catch (const ContractError& e) {
      if (e.code() != Errc::no_cap) throw;
    }
  }
  const Receipt r =
      gateway_.submit(sign(OpenDoseRequest{me.user_id, request_file, std::nullopt, {}}));
  return EmergencyOutcome{r.tx_id, true, std::nullopt};
}

Receipt CareClient::emergency_decide(const TxId& request, bool approve, double dose_mg) {
  return gateway_.submit(
      sign(EmergencyDecision{request, me_.user_id, approve, approve ? dose_mg : 0.0}));
}

}  // namespace careledger::careflow
