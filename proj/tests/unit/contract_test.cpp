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

#include <gtest/gtest.h>

#include "careledger/contract/contract.hpp"
#include "support/access_matrix.hpp"
#include "support/random_workflow.hpp"
#include "support/world.hpp"

namespace careledger::contract {
namespace {

using testutil::World;

#define EXPECT_CONTRACT_ERROR(stmt, errc)                                   \
  do {                                                                      \
    try {                                                                   \
      stmt;                                                                 \
      ADD_FAILURE() << "expected " << to_string(errc);                      \
    } catch (const ContractError& e) {                                      \
      EXPECT_EQ(e.code(), errc) << to_string(e.code()) << ": " << e.what(); \
    }                                                                       \
  } while (0)

std::string deny_reason(const FetchDecision& d) {
  if (const auto* deny = std::get_if<Deny>(&d)) return deny->reason;
  return "";
}

class ContractTest : public ::testing::Test {
 protected:
  ContractTest() {
    w.add_user("pat", Role::patient);
    w.add_user("pat2", Role::patient);
    w.add_user("doc", Role::physician);
    w.add_user("doc2", Role::physician);
    w.add_user("nurse", Role::nurse);
    w.add_user("dev", Role::iot_device, "pat");
  }

  ContractState& s() { return w.state(); }

  // Dose history for "pat": an approved prescription of `dose`.
  TxId approved_dose(double dose) {
    w.add_file("pat", FileKind::medical_history, "pat", {"pat", "doc"});
    const auto doc = w.add_file("pat", FileKind::dose_request, "pat");
    auto open = w.tx("pat", OpenDoseRequest{"pat", doc, std::nullopt, {}});
    w.apply(open);
    const auto rx = w.add_file("doc", FileKind::prescription, "pat");
    w.apply(w.tx("doc", RecordPrescription{"pat", open.tx_id, dose, rx, Decision::overridden}));
    return open.tx_id;
  }

  TxId open_emergency(const std::string& patient = "pat") {
    const auto doc = w.add_file(patient, FileKind::dose_request, patient, {patient, "nurse"});
    auto t = w.tx(patient, EmergencyDoseRequest{patient, doc});
    w.apply(t);
    return t.tx_id;
  }

  World w;
};

TEST_F(ContractTest, RequestAddsPendingEntry) {
  const auto before = s().pending_registrations.size();
  w.apply(w.request_tx("newbie", Role::patient));
  EXPECT_EQ(s().pending_registrations.size(), before + 1);
  EXPECT_EQ(s().users.at("newbie").status, UserStatus::pending);
  EXPECT_FALSE(s().users.at("newbie").sign_public.has_value());
}

TEST_F(ContractTest, ReRegisteringActiveUserIsRejected) {
  EXPECT_CONTRACT_ERROR(w.apply(w.request_tx("pat", Role::patient)), Errc::already_registered);
  EXPECT_CONTRACT_ERROR(w.apply(w.request_tx("pat", Role::physician)), Errc::already_registered);
}

TEST_F(ContractTest, DuplicatePendingRequestIsRejected) {
  w.apply(w.request_tx("x", Role::patient));
  EXPECT_CONTRACT_ERROR(w.apply(w.request_tx("x", Role::patient)), Errc::duplicate_pending);
}

TEST_F(ContractTest, AdminApprovalActivates) {
  w.apply(w.request_tx("p9", Role::patient));
  w.apply(w.approve_tx("p9"));
  const auto& u = s().users.at("p9");
  EXPECT_TRUE(u.active());
  EXPECT_EQ(u.sign_public, w.keys("p9").sign_public);
  EXPECT_TRUE(std::find(s().pending_registrations.begin(), s().pending_registrations.end(),
                        "p9") == s().pending_registrations.end());
}

TEST_F(ContractTest, NonAdminCannotApprove) {
  w.apply(w.request_tx("p9", Role::patient));
  const auto kp = crypto::generate_keypair("p9");
  EXPECT_CONTRACT_ERROR(w.apply(w.tx("doc", RegisterUser{"p9", Role::patient, "User p9",
                                                         kp.sign_public, kp.enc_public, {}})),
                        Errc::not_admin);
}

TEST_F(ContractTest, ApprovingUnknownIdIsUnknownPending) {
  const auto kp = crypto::generate_keypair("ghost");
  EXPECT_CONTRACT_ERROR(w.apply(w.tx(w.admin(), RegisterUser{"ghost", Role::patient, "g",
                                                             kp.sign_public, kp.enc_public, {}})),
                        Errc::unknown_pending);
}

TEST_F(ContractTest, ApprovalMustMatchRequest) {
  w.apply(w.request_tx("p9", Role::patient));
  const auto kp = crypto::generate_keypair("p9");
  EXPECT_CONTRACT_ERROR(w.apply(w.tx(w.admin(), RegisterUser{"p9", Role::physician, "User p9",
                                                             kp.sign_public, kp.enc_public, {}})),
                        Errc::invalid_payload);
}

TEST_F(ContractTest, RegistrationShapeRules) {
  EXPECT_CONTRACT_ERROR(w.apply(w.request_tx("a2", Role::admin)), Errc::forbidden);
  EXPECT_CONTRACT_ERROR(w.apply(w.request_tx("d2", Role::iot_device)), Errc::invalid_payload);
  EXPECT_CONTRACT_ERROR(w.apply(w.request_tx("d2", Role::iot_device, "doc")), Errc::invalid_payload);
  EXPECT_CONTRACT_ERROR(w.apply(w.request_tx("p3", Role::patient, "pat")), Errc::invalid_payload);
  EXPECT_CONTRACT_ERROR(w.apply(w.request_tx("bad id", Role::patient)), Errc::invalid_payload);
  // Requests are unsigned and authored by the requester.
  auto t = w.request_tx("p4", Role::patient);
  t.signature = crypto::Bytes(64, 1);
  EXPECT_CONTRACT_ERROR(w.apply(t), Errc::invalid_payload);
  EXPECT_CONTRACT_ERROR(
      w.apply(make_unsigned("someone", 1, RequestRegistration{"p4", Role::patient, "x", {}})),
      Errc::invalid_payload);
}

TEST(ContractGenesis, FirstTransactionMustBeAdminSelfRegistration) {
  ContractState s;
  auto kp = crypto::generate_keypair("p");
  EXPECT_CONTRACT_ERROR(apply_in_place(s, make_signed("p", kp.sign_private, 1,
                                                      RegisterUser{"p", Role::patient, "p",
                                                                   kp.sign_public, kp.enc_public,
                                                                   {}})),
                        Errc::invalid_payload);
  EXPECT_CONTRACT_ERROR(
      apply_in_place(s, make_unsigned("p", 1, RequestRegistration{"p", Role::patient, "p", {}})),
      Errc::invalid_payload);
  auto other = crypto::generate_keypair("admin");
  EXPECT_CONTRACT_ERROR(apply_in_place(s, make_signed("admin", other.sign_private, 1,
                                                      RegisterUser{"admin", Role::admin, "a",
                                                                   kp.sign_public, kp.enc_public,
                                                                   {}})),
                        Errc::bad_signature);
  EXPECT_TRUE(s.users.empty());
}

TEST_F(ContractTest, PendingUserIsNotAuthenticated) {
  w.apply(w.request_tx("p9", Role::patient));
  const auto kp = crypto::generate_keypair("p9");
  StoreFileHash p{crypto::content_hash("c"), crypto::content_hash("p"), FileKind::medical_history,
                  "p9", {crypto::wrap_file_key("p9", kp.enc_public, crypto::generate_file_key())}};
  try {
    apply_in_place(s(), make_signed("p9", kp.sign_private, 5, p));
    FAIL();
  } catch (const ContractError& e) {
    EXPECT_EQ(e.code(), Errc::unauthenticated);
    EXPECT_STREQ(e.what(), "User is not authenticated");
  }
}

TEST_F(ContractTest, ForgedSignatureRejected) {
  auto t = w.tx("pat", RevokeAccess{crypto::content_hash("x"), "doc"});
  t.signature[0] ^= 1;
  EXPECT_CONTRACT_ERROR(w.apply(t), Errc::bad_signature);
  // Signed by someone else's key but claiming to be pat.
  auto forged = make_signed("pat", w.keys("doc").sign_private, 9,
                            RevokeAccess{crypto::content_hash("x"), "doc"});
  EXPECT_CONTRACT_ERROR(w.apply(forged), Errc::bad_signature);
}

TEST_F(ContractTest, ReplayedTransactionRejected) {
  const auto h = w.add_file("pat", FileKind::medical_history, "pat");
  auto grant = w.tx("pat", GrantAccess{h, "doc", w.wrap_for("doc")});
  w.apply(grant);
  w.revoke("pat", h, "doc");
  EXPECT_CONTRACT_ERROR(w.apply(grant), Errc::duplicate_tx);
  EXPECT_TRUE(s().files.at(h).revoked.contains("doc"));
}

TEST_F(ContractTest, TamperedTxIdRejected) {
  auto t = w.tx("pat", RevokeAccess{crypto::content_hash("x"), "doc"});
  t.tx_id.bytes[0] ^= 1;
  EXPECT_CONTRACT_ERROR(w.apply(t), Errc::invalid_payload);
}

TEST_F(ContractTest, PatientStoresOwnFile) {
  const auto h = w.add_file("pat", FileKind::medical_history, "pat");
  const auto& f = s().files.at(h);
  EXPECT_EQ(f.owner_patient, "pat");
  EXPECT_EQ(f.uploader, "pat");
  EXPECT_TRUE(f.wrapped_keys.contains("pat"));
  EXPECT_NE(f.content_hash, f.plaintext_hash);
}

TEST_F(ContractTest, StoreRules) {
  EXPECT_CONTRACT_ERROR(w.add_file("dev", FileKind::motion_capture, "pat2"),
                        Errc::device_owner_mismatch);
  EXPECT_CONTRACT_ERROR(w.add_file("dev", FileKind::medical_history, "pat"), Errc::forbidden);
  EXPECT_CONTRACT_ERROR(w.add_file("pat", FileKind::medical_history, "pat2"), Errc::not_owner);
  EXPECT_CONTRACT_ERROR(w.add_file("nurse", FileKind::prescription, "pat"), Errc::forbidden);
  EXPECT_CONTRACT_ERROR(w.add_file(w.admin(), FileKind::prescription, "pat"), Errc::forbidden);
  EXPECT_CONTRACT_ERROR(w.add_file("doc", FileKind::prescription, "pat"),
                        Errc::no_care_relationship);
  EXPECT_CONTRACT_ERROR(w.add_file("pat", FileKind::medical_history, "pat", {"doc"}),
                        Errc::invalid_payload);  // owner missing
  EXPECT_CONTRACT_ERROR(w.add_file("pat", FileKind::medical_history, "pat", {"pat", w.admin()}),
                        Errc::forbidden);
  EXPECT_CONTRACT_ERROR(w.add_file("pat", FileKind::medical_history, "pat", {"pat", "dev"}),
                        Errc::forbidden);

  const auto dev_file = w.add_file("dev", FileKind::motion_capture, "pat");
  EXPECT_EQ(s().files.at(dev_file).wrapped_keys.size(), 1u);
  EXPECT_CONTRACT_ERROR(w.add_file("dev", FileKind::motion_capture, "pat", {"pat", "doc"}),
                        Errc::forbidden);
}

TEST_F(ContractTest, DuplicateHashRejected) {
  const auto h = w.add_file("pat", FileKind::medical_history, "pat");
  StoreFileHash p{h, crypto::content_hash("other"), FileKind::medical_history, "pat",
                  {w.wrap_for("pat")}};
  EXPECT_CONTRACT_ERROR(w.apply(w.tx("pat", p)), Errc::duplicate_hash);
}

TEST_F(ContractTest, PlaintextAddressEqualsContentAddressRejected) {
  const auto h = crypto::content_hash("same");
  StoreFileHash p{h, h, FileKind::medical_history, "pat", {w.wrap_for("pat")}};
  EXPECT_CONTRACT_ERROR(w.apply(w.tx("pat", p)), Errc::invalid_payload);
}

TEST_F(ContractTest, PhysicianWithRelationshipWritesPrescription) {
  w.add_file("pat", FileKind::medical_history, "pat", {"pat", "doc"});
  const auto rx = w.add_file("doc", FileKind::prescription, "pat");
  EXPECT_TRUE(s().files.at(rx).wrapped_keys.contains("doc"));
  EXPECT_CONTRACT_ERROR(w.add_file("doc", FileKind::medical_history, "pat"), Errc::forbidden);
  EXPECT_CONTRACT_ERROR(w.add_file("doc", FileKind::prescription, "pat", {"pat", "doc", "nurse"}),
                        Errc::forbidden);
}

TEST_F(ContractTest, GrantAndRevoke) {
  const auto h = w.add_file("pat", FileKind::medical_history, "pat");
  EXPECT_TRUE(std::holds_alternative<Deny>(authorize_fetch(s(), "doc", h)));
  w.grant("pat", h, "doc");
  EXPECT_TRUE(s().files.at(h).wrapped_keys.contains("doc"));
  EXPECT_TRUE(std::holds_alternative<Allow>(authorize_fetch(s(), "doc", h)));
  EXPECT_TRUE(has_care_relationship(s(), "doc", "pat"));

  w.revoke("pat", h, "doc");
  EXPECT_EQ(deny_reason(authorize_fetch(s(), "doc", h)), "Access to this file has been revoked");
  EXPECT_FALSE(has_care_relationship(s(), "doc", "pat"));
  // Revocation is a flag; the key record stays.
  EXPECT_TRUE(s().files.at(h).wrapped_keys.contains("doc"));

  w.grant("pat", h, "doc");
  EXPECT_TRUE(std::holds_alternative<Allow>(authorize_fetch(s(), "doc", h)));
}

TEST_F(ContractTest, GrantErrors) {
  const auto h = w.add_file("pat", FileKind::medical_history, "pat");
  EXPECT_CONTRACT_ERROR(w.apply(w.tx("doc", GrantAccess{h, "doc2", w.wrap_for("doc2")})),
                        Errc::not_owner);
  EXPECT_CONTRACT_ERROR(w.grant("pat", crypto::content_hash("nope"), "doc"), Errc::unknown_file);
  w.apply(w.request_tx("doc3", Role::physician));
  EXPECT_CONTRACT_ERROR(
      w.apply(w.tx("pat", GrantAccess{h, "doc3", crypto::WrappedKey{"doc3", crypto::Bytes(92)}})),
      Errc::unknown_grantee);
  EXPECT_CONTRACT_ERROR(w.grant("pat", h, w.admin()), Errc::forbidden);
  EXPECT_CONTRACT_ERROR(w.grant("pat", h, "dev"), Errc::forbidden);
  EXPECT_CONTRACT_ERROR(w.grant("pat", h, "pat2"), Errc::forbidden);
  EXPECT_CONTRACT_ERROR(w.apply(w.tx("pat", GrantAccess{h, "doc", w.wrap_for("doc2")})),
                        Errc::invalid_payload);
  EXPECT_CONTRACT_ERROR(w.revoke("pat", h, "pat"), Errc::forbidden);
  EXPECT_CONTRACT_ERROR(w.revoke("pat", h, "doc"), Errc::unknown_grantee);
  w.grant("pat", h, "doc");
  w.revoke("pat", h, "doc");
  EXPECT_CONTRACT_ERROR(w.revoke("pat", h, "doc"), Errc::invalid_payload);
  EXPECT_CONTRACT_ERROR(w.revoke("doc", h, "doc"), Errc::not_owner);
}

TEST_F(ContractTest, AuthorizeFetchExamples) {
  const auto h = w.add_file("pat", FileKind::medical_history, "pat", {"pat", "nurse"});
  auto d = authorize_fetch(s(), "pat", h);
  ASSERT_TRUE(std::holds_alternative<Allow>(d));
  EXPECT_EQ(std::get<Allow>(d).wrapped_key.recipient_id, "pat");
  EXPECT_EQ(deny_reason(authorize_fetch(s(), "mallory", h)), "User is not valid");
  EXPECT_EQ(deny_reason(authorize_fetch(s(), "pat2", h)), "User is not valid");
  w.apply(w.request_tx("pend", Role::patient));
  EXPECT_EQ(deny_reason(authorize_fetch(s(), "pend", h)), "User is not valid");
  EXPECT_NE(deny_reason(authorize_fetch(s(), "nurse", h)), "");  // nurse level excludes history
  EXPECT_NE(deny_reason(authorize_fetch(s(), w.admin(), h)), "");
}

TEST_F(ContractTest, NurseNeedsOpenEmergency) {
  approved_dose(100);
  const auto rx_file = [&] {
    for (const auto& [h, f] : s().files) {
      if (f.kind == FileKind::prescription) return h;
    }
    return ContentHash{};
  }();
  w.grant("pat", rx_file, "nurse");
  EXPECT_EQ(deny_reason(authorize_fetch(s(), "nurse", rx_file)),
            "No open emergency request for this patient");
  const auto em = open_emergency();
  EXPECT_TRUE(std::holds_alternative<Allow>(authorize_fetch(s(), "nurse", rx_file)));
  w.apply(w.tx("nurse", EmergencyDecision{em, "nurse", true, 50}));
  EXPECT_TRUE(std::holds_alternative<Deny>(authorize_fetch(s(), "nurse", rx_file)));
}

TEST(AccessMatrix, AllEightyCasesMatchTable) {
  int allows = 0;
  for (const auto& c : testutil::all_cases()) {
    const bool expect = testutil::expected_allow(c.role, c.rel, c.kind);
    const auto d = authorize_fetch(c.state, c.viewer, c.file);
    EXPECT_EQ(std::holds_alternative<Allow>(d), expect)
        << to_string(c.role) << "/" << testutil::relation_name(c.rel) << "/" << to_string(c.kind)
        << " -> " << deny_reason(d);
    allows += expect;
  }
  EXPECT_EQ(allows, 16);
}

TEST_F(ContractTest, IntegrityChecksAreIndependent) {
  const crypto::Bytes cipher = crypto::random_bytes(64);
  const std::string plain = "history";
  StoreFileHash p{crypto::content_hash(cipher), crypto::content_hash(plain),
                  FileKind::medical_history, "pat", {w.wrap_for("pat")}};
  w.apply(w.tx("pat", p));

  auto ok = check_integrity(s(), p.content_hash, cipher, crypto::as_bytes(plain));
  EXPECT_TRUE(ok.store_level);
  EXPECT_EQ(ok.end_to_end, true);
  EXPECT_EQ(ok.message(), "Integrity completed");

  auto flipped = cipher;
  flipped[5] ^= 0x10;
  auto bad_store = check_integrity(s(), p.content_hash, flipped, std::nullopt);
  EXPECT_FALSE(bad_store.store_level);
  EXPECT_FALSE(bad_store.end_to_end.has_value());
  EXPECT_EQ(bad_store.message(), "Integrity does not complete");

  auto bad_e2e = check_integrity(s(), p.content_hash, cipher, crypto::as_bytes("other"));
  EXPECT_TRUE(bad_e2e.store_level);
  EXPECT_EQ(bad_e2e.end_to_end, false);
  EXPECT_FALSE(bad_e2e.ok());

  EXPECT_CONTRACT_ERROR(check_integrity(s(), crypto::content_hash("?"), cipher, std::nullopt),
                        Errc::unknown_file);
}

TEST(ListPhysicians, SortedActiveOnly) {
  World w;
  EXPECT_TRUE(list_physicians(w.state()).empty());
  w.add_user("zed", Role::physician);
  w.add_user("amy", Role::physician);
  w.add_user("pat", Role::patient);
  w.apply(w.request_tx("bob", Role::physician));
  auto docs = list_physicians(w.state());
  ASSERT_EQ(docs.size(), 2u);
  EXPECT_EQ(docs[0].user_id, "amy");
  EXPECT_EQ(docs[1].user_id, "zed");
}

TEST_F(ContractTest, PrescriptionFlow) {
  w.add_file("pat", FileKind::medical_history, "pat", {"pat", "doc"});
  const auto doc_file = w.add_file("pat", FileKind::dose_request, "pat");
  auto open = w.tx("pat", OpenDoseRequest{"pat", doc_file, std::nullopt, {}});
  w.apply(open);
  EXPECT_EQ(s().dose_requests.at(open.tx_id).status, DoseRequestStatus::pending_physician);

  const auto rx = w.add_file("doc", FileKind::prescription, "pat");
  // Nothing was suggested, so nothing can be confirmed.
  EXPECT_CONTRACT_ERROR(
      w.apply(w.tx("doc", RecordPrescription{"pat", open.tx_id, 100, rx, Decision::confirmed})),
      Errc::invalid_payload);
  EXPECT_CONTRACT_ERROR(
      w.apply(w.tx("doc2", RecordPrescription{"pat", open.tx_id, 100, rx, Decision::overridden})),
      Errc::no_care_relationship);
  EXPECT_CONTRACT_ERROR(
      w.apply(w.tx("nurse", RecordPrescription{"pat", open.tx_id, 100, rx, Decision::overridden})),
      Errc::forbidden);
  w.apply(w.tx("doc", RecordPrescription{"pat", open.tx_id, 100, rx, Decision::overridden}));
  const auto& r = s().dose_requests.at(open.tx_id);
  EXPECT_EQ(r.status, DoseRequestStatus::physician_overridden);
  EXPECT_EQ(r.decided_dose_mg, 100);
  EXPECT_EQ(s().last_approved_dose.at("pat"), 100);

  EXPECT_CONTRACT_ERROR(
      w.apply(w.tx("doc", RecordPrescription{"pat", open.tx_id, 120, rx, Decision::overridden})),
      Errc::bad_status);
  EXPECT_CONTRACT_ERROR(w.apply(w.tx("doc", RecordPrescription{"pat", crypto::content_hash("?"),
                                                               1, rx, Decision::overridden})),
                        Errc::unknown_request);
}

TEST_F(ContractTest, ConfirmKeepsSuggestedDose) {
  approved_dose(100);
  const auto doc_file = w.add_file("pat", FileKind::dose_request, "pat");
  DoseSuggestion sg{100.0, 0.4, false, std::nullopt};
  auto open = w.tx("pat", OpenDoseRequest{"pat", doc_file, std::nullopt, sg});
  w.apply(open);
  const auto rx = w.add_file("doc", FileKind::prescription, "pat");
  EXPECT_CONTRACT_ERROR(
      w.apply(w.tx("doc", RecordPrescription{"pat", open.tx_id, 90, rx, Decision::confirmed})),
      Errc::invalid_payload);
  w.apply(w.tx("doc", RecordPrescription{"pat", open.tx_id, 100, rx, Decision::confirmed}));
  EXPECT_EQ(s().dose_requests.at(open.tx_id).status, DoseRequestStatus::physician_confirmed);
}

TEST_F(ContractTest, AutomaticApprovalRepeatsLastDose) {
  approved_dose(100);
  const auto doc_file = w.add_file("pat", FileKind::dose_request, "pat");
  // An auto suggestion with a different dose is malformed.
  EXPECT_CONTRACT_ERROR(
      w.apply(w.tx("pat", OpenDoseRequest{"pat", doc_file, std::nullopt,
                                          DoseSuggestion{120.0, 0.0, true, std::nullopt}})),
      Errc::invalid_payload);
  auto open = w.tx("pat", OpenDoseRequest{"pat", doc_file, std::nullopt,
                                          DoseSuggestion{100.0, 0.0, true, std::nullopt}});
  w.apply(open);
  const auto rx = w.add_file("pat", FileKind::prescription, "pat");
  EXPECT_CONTRACT_ERROR(
      w.apply(w.tx("pat", RecordPrescription{"pat", open.tx_id, 110, rx, Decision::automatic})),
      Errc::invalid_payload);
  w.apply(w.tx("pat", RecordPrescription{"pat", open.tx_id, 100, rx, Decision::automatic}));
  EXPECT_EQ(s().dose_requests.at(open.tx_id).status, DoseRequestStatus::auto_approved);
}

TEST_F(ContractTest, DoseRequestFilesMustBelongToPatient) {
  const auto hist = w.add_file("pat", FileKind::medical_history, "pat");
  EXPECT_CONTRACT_ERROR(w.apply(w.tx("pat", OpenDoseRequest{"pat", hist, std::nullopt, {}})),
                        Errc::invalid_payload);
  const auto other = w.add_file("pat2", FileKind::dose_request, "pat2");
  EXPECT_CONTRACT_ERROR(w.apply(w.tx("pat", OpenDoseRequest{"pat", other, std::nullopt, {}})),
                        Errc::invalid_payload);
  EXPECT_CONTRACT_ERROR(w.apply(w.tx("pat", OpenDoseRequest{"pat2", other, std::nullopt, {}})),
                        Errc::not_owner);
  EXPECT_CONTRACT_ERROR(w.apply(w.tx("doc", OpenDoseRequest{"pat", other, std::nullopt, {}})),
                        Errc::forbidden);
}

TEST_F(ContractTest, EmergencyWithoutHistoryIsNoCap) {
  const auto doc = w.add_file("pat", FileKind::dose_request, "pat");
  EXPECT_CONTRACT_ERROR(w.apply(w.tx("pat", EmergencyDoseRequest{"pat", doc})), Errc::no_cap);
}

TEST_F(ContractTest, NurseApprovesUpToCap) {
  approved_dose(100);
  const auto em = open_emergency();
  EXPECT_EQ(s().dose_requests.at(em).status, DoseRequestStatus::emergency_pending);
  try {
    w.apply(w.tx("nurse", EmergencyDecision{em, "nurse", true, 150}));
    FAIL();
  } catch (const ContractError& e) {
    EXPECT_EQ(e.code(), Errc::dose_exceeds_cap);
    EXPECT_NE(std::string(e.what()).find("100 mg"), std::string::npos) << e.what();
  }
  EXPECT_CONTRACT_ERROR(w.apply(w.tx("doc", EmergencyDecision{em, "doc", true, 50})),
                        Errc::forbidden);
  w.apply(w.tx("nurse", EmergencyDecision{em, "nurse", true, 100}));
  const auto& r = s().dose_requests.at(em);
  EXPECT_EQ(r.status, DoseRequestStatus::emergency_decided);
  EXPECT_EQ(r.approved, true);
  EXPECT_EQ(r.cap_mg, 100);
  EXPECT_EQ(s().last_approved_dose.at("pat"), 100);
  EXPECT_CONTRACT_ERROR(w.apply(w.tx("nurse", EmergencyDecision{em, "nurse", true, 10})),
                        Errc::bad_status);
}

TEST_F(ContractTest, LowerEmergencyDoseBecomesTheNewCap) {
  approved_dose(100);
  w.apply(w.tx("nurse", EmergencyDecision{open_emergency(), "nurse", true, 60}));
  EXPECT_EQ(s().last_approved_dose.at("pat"), 60);
  EXPECT_CONTRACT_ERROR(w.apply(w.tx("nurse", EmergencyDecision{open_emergency(), "nurse", true, 80})),
                        Errc::dose_exceeds_cap);
}

TEST_F(ContractTest, DenialLeavesDoseUntouched) {
  approved_dose(100);
  const auto em = open_emergency();
  EXPECT_CONTRACT_ERROR(w.apply(w.tx("nurse", EmergencyDecision{em, "nurse", false, 5})),
                        Errc::invalid_payload);
  w.apply(w.tx("nurse", EmergencyDecision{em, "nurse", false, 0}));
  EXPECT_EQ(s().dose_requests.at(em).approved, false);
  EXPECT_EQ(s().last_approved_dose.at("pat"), 100);
}

TEST_F(ContractTest, FailedApplyLeavesStateUntouched) {
  approved_dose(100);
  const auto em = open_emergency();
  const auto before = canonical_state(s());
  EXPECT_THROW(w.apply(w.tx("nurse", EmergencyDecision{em, "nurse", true, 500})), ContractError);
  EXPECT_THROW(w.add_file("dev", FileKind::motion_capture, "pat2"), ContractError);
  EXPECT_THROW(w.apply(w.request_tx("pat", Role::patient)), ContractError);
  EXPECT_EQ(canonical_state(s()), before);
}

TEST_F(ContractTest, ApplyIsDeterministic) {
  const auto base = s();
  const auto t = w.tx("pat", StoreFileHash{crypto::content_hash("c1"), crypto::content_hash("p1"),
                                           FileKind::medical_history, "pat",
                                           {w.wrap_for("pat"), w.wrap_for("doc")}});
  const auto a = apply(base, t);
  const auto b = apply(base, t);
  EXPECT_EQ(canonical_state(a), canonical_state(b));
  EXPECT_EQ(state_digest(a), state_digest(b));
  EXPECT_NE(state_digest(a), state_digest(base));
}

// Randomized workflows: nurse approvals never exceed the cap and
// last_approved_dose only moves on prescriptions and approvals. Also checks
// that no accepted transaction removes a user or a file record.
TEST(ContractProperty, RandomWorkflowsKeepInvariants) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    World w;
    std::size_t users = 0, files = 0;
    testutil::RandomWorkflow gen(
        seed, w.keys(w.admin()), [&]() -> const ContractState& { return w.state(); },
        [&](const Transaction& tx) {
          try {
            w.apply(tx);
          } catch (const ContractError&) {
            return false;
          }
          EXPECT_GE(w.state().users.size(), users);
          EXPECT_GE(w.state().files.size(), files);
          users = w.state().users.size();
          files = w.state().files.size();
          return true;
        });
    gen.run(400);
    EXPECT_GE(gen.accepted(), 400u);
    EXPECT_GT(gen.rejected(), 0u);
    EXPECT_GT(gen.cap_checks(), 0u);
    EXPECT_TRUE(gen.violations().empty()) << gen.violations().front();
  }
}

}  // namespace
}  // namespace careledger::contract
