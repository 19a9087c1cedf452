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

// careledger: command-line client for a careledger-node, plus offline chain
// tools and the wearable simulator.
//
// Exit codes: 0 ok; 1 verification failed (chain, integrity); 2 request
// rejected by the node or invalid input; 3 node unreachable; 4 other error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "careledger/careflow/client.hpp"
#include "careledger/cli/http_gateway.hpp"
#include "careledger/cli/simulator.hpp"
#include "careledger/crypto/keyfile.hpp"
#include "careledger/ledger/chain.hpp"
#include "careledger/service/wire.hpp"

namespace {

using namespace careledger;

struct Globals {
  std::string node = "http://127.0.0.1:8470";
  std::string key;
  bool json = false;
};

struct VerificationFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void emit(const Globals& g, const Json& j, const std::string& human) {
  if (g.json) {
    std::cout << canonical(j) << "\n";
  } else {
    std::cout << human << "\n";
  }
}

std::string read_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_binary(const std::string& path, crypto::ByteView bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("cannot write " + path);
}

Role require_role(const std::string& s) {
  auto r = parse_role(s);
  if (!r) throw careflow::ValidationError("unknown role '" + s + "'");
  return *r;
}

FileKind require_kind(const std::string& s) {
  auto k = parse_file_kind(s);
  if (!k) throw careflow::ValidationError("unknown file kind '" + s + "'");
  return *k;
}

Digest require_digest(const std::string& s) {
  try {
    return Digest::from_hex(s);
  } catch (const crypto::DecodeError&) {
    throw careflow::ValidationError("'" + s + "' is not a 64-character hex digest");
  }
}

// A logged-in client for the user in --key.
struct Connection {
  std::unique_ptr<cli::HttpGateway> gateway;
  std::unique_ptr<careflow::CareClient> client;
};

Connection connect(const Globals& g) {
  if (g.key.empty()) throw careflow::ValidationError("--key (or CARELEDGER_KEY) is required");
  crypto::KeyPair kp = crypto::load_keyfile(g.key);
  Connection c;
  c.gateway = std::make_unique<cli::HttpGateway>(g.node);
  c.gateway->login(kp);
  c.client = std::make_unique<careflow::CareClient>(*c.gateway, std::move(kp));
  return c;
}

Json receipt_json(const careflow::Receipt& r) { return service::to_json(r); }

std::string receipt_text(const careflow::Receipt& r) {
  return "committed tx " + r.tx_id.hex() + " in block " + std::to_string(r.height);
}

template <typename T>
Json records_json(const std::vector<T>& items) {
  Json arr = Json::array();
  for (const auto& it : items) arr.push_back(contract::to_json(it));
  return arr;
}

std::string report_text(const ledger::ChainReport& r) {
  if (r.valid) return "chain valid";
  return "chain INVALID: first_bad_height=" + std::to_string(r.first_bad_height.value_or(0)) +
         " (" + r.reason + ")";
}

Json outcome_json(const careflow::DoseOutcome& o) {
  Json j{{"request_id", o.request_id.hex()},
         {"status", std::string(to_string(o.status))},
         {"suggestion", suggestion_to_json(o.suggestion)}};
  if (o.prescription_file) j["prescription_file"] = o.prescription_file->hex();
  return j;
}

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

int fail(const Globals& g, int code, std::string_view kind, const std::string& message) {
  std::cerr << "error: " << kind << ": " << message << "\n";
  if (g.json) std::cout << canonical(service::error_body(kind, message)) << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CareLedger client"};
  app.require_subcommand(1);
  Globals g;
  if (const char* env = std::getenv("CARELEDGER_NODE")) g.node = env;
  if (const char* env = std::getenv("CARELEDGER_KEY")) g.key = env;
  app.add_option("--node", g.node, "Node base URL (env CARELEDGER_NODE)");
  app.add_option("--key", g.key, "Keyfile of the acting user (env CARELEDGER_KEY)");
  app.add_flag("--json", g.json, "Canonical JSON on stdout");
  app.fallthrough();

  // register
  std::string reg_user, reg_role, reg_name, reg_bound;
  auto* reg = app.add_subcommand("register", "Ask the admin for an account");
  reg->add_option("--user", reg_user, "Requested user id")->required();
  reg->add_option("--role", reg_role, "patient|physician|nurse|iot_device")->required();
  reg->add_option("--name", reg_name, "Display name")->required();
  reg->add_option("--bound-patient", reg_bound, "Patient an iot_device records for");

  auto* pending = app.add_subcommand("pending", "List pending registrations (admin)");

  std::string approve_id, approve_out;
  auto* approve = app.add_subcommand("approve", "Approve a registration and write its keyfile (admin)");
  approve->add_option("user", approve_id)->required();
  approve->add_option("--out", approve_out, "Keyfile to create (mode 0600)")->required();

  auto* login = app.add_subcommand("login", "Check the keyfile against the node");

  std::string up_file, up_kind, up_owner, up_share;
  auto* upload = app.add_subcommand("upload", "Encrypt and upload a file");
  upload->add_option("file", up_file)->required()->check(CLI::ExistingFile);
  upload->add_option("--kind", up_kind, "medical_history|motion_capture|prescription|dose_request")
      ->required();
  upload->add_option("--owner", up_owner, "Owning patient (default: yourself)");
  upload->add_option("--share", up_share, "Comma-separated users to wrap the key for as well");

  std::string fetch_hash, fetch_out;
  auto* fetch = app.add_subcommand("fetch", "Download and decrypt a file");
  fetch->add_option("hash", fetch_hash)->required();
  fetch->add_option("--out", fetch_out, "Write here instead of stdout");

  std::string share_hash, share_to;
  auto* share = app.add_subcommand("share", "Grant a physician or nurse access to your file");
  share->add_option("hash", share_hash)->required();
  share->add_option("grantee", share_to)->required();

  std::string revoke_hash, revoke_from;
  auto* revoke = app.add_subcommand("revoke", "Revoke access to your file");
  revoke->add_option("hash", revoke_hash)->required();
  revoke->add_option("grantee", revoke_from)->required();

  std::string integ_hash;
  auto* integrity = app.add_subcommand("integrity", "Check a file against its ledger hashes");
  integrity->add_option("hash", integ_hash)->required();

  auto* physicians = app.add_subcommand("physicians", "List registered physicians");

  std::string files_patient;
  auto* files = app.add_subcommand("files", "List files visible to you");
  files->add_option("--patient", files_patient);

  std::string rd_motion, rd_note;
  auto* request_dose = app.add_subcommand("request-dose", "Open a dose request (patient)");
  request_dose->add_option("--motion", rd_motion, "Motion capture to compare with history");
  request_dose->add_option("--note", rd_note);

  std::string req_patient;
  auto* requests = app.add_subcommand("requests", "List dose requests visible to you");
  requests->add_option("--patient", req_patient);

  std::string rx_request;
  bool rx_confirm = false, rx_override = false;
  std::optional<double> rx_dose;
  auto* prescribe = app.add_subcommand("prescribe", "Decide a dose request (physician)");
  prescribe->add_option("request", rx_request)->required();
  auto* rx_c = prescribe->add_flag("--confirm", rx_confirm, "Confirm the suggested dose");
  auto* rx_o = prescribe->add_flag("--override", rx_override, "Prescribe a different dose");
  rx_c->excludes(rx_o);
  prescribe->add_option("--dose", rx_dose, "Dose in mg");

  auto* emergency = app.add_subcommand("emergency", "Emergency dose workflow");
  emergency->require_subcommand(1);
  std::string em_note;
  auto* em_request = emergency->add_subcommand("request", "Ask a nurse for a dose (patient)");
  em_request->add_option("--note", em_note);
  std::string em_id;
  bool em_approve = false, em_deny = false;
  double em_dose = 0;
  auto* em_decide = emergency->add_subcommand("decide", "Approve or deny (nurse)");
  em_decide->add_option("request", em_id)->required();
  auto* em_a = em_decide->add_flag("--approve", em_approve);
  auto* em_d = em_decide->add_flag("--deny", em_deny);
  em_a->excludes(em_d);
  em_decide->add_option("--dose", em_dose, "Dose in mg (at most the last approved dose)");

  auto* chain = app.add_subcommand("chain", "Ledger tools");
  chain->require_subcommand(1);
  std::string verify_log;
  auto* chain_verify = chain->add_subcommand("verify", "Verify chain.log (offline with --log)");
  chain_verify->add_option("--log", verify_log, "Path to chain.log");
  std::string replay_log;
  auto* chain_replay = chain->add_subcommand("replay", "Verify and replay chain.log offline");
  chain_replay->add_option("--log", replay_log, "Path to chain.log")->required();

  cli::DeviceSimulation sim;
  std::string sim_joints = "wrist,elbow", sim_out;
  bool sim_dry = false;
  auto* simulate = app.add_subcommand("simulate-device", "Synthesize a motion capture and post it");
  simulate->add_option("--patient", sim.patient_id)->required();
  simulate->add_option("--joints", sim_joints, "Comma-separated joint names");
  simulate->add_option("--rate", sim.rate_hz, "Samples per second");
  simulate->add_option("--seconds", sim.seconds);
  simulate->add_option("--tremor-hz", sim.tremor_hz);
  simulate->add_option("--amplitude-deg", sim.amplitude_deg);
  simulate->add_option("--noise-deg", sim.noise_deg);
  simulate->add_option("--seed", sim.seed);
  simulate->add_option("--device", sim.device_id, "Device id for --dry-run");
  simulate->add_flag("--dry-run", sim_dry, "Write the motion file instead of posting it");
  simulate->add_option("--out", sim_out, "With --dry-run: file to write (default stdout)");

  std::string feat_file;
  auto* features = app.add_subcommand("features", "Feature vector of a motion file (offline)");
  features->add_option("file", feat_file)->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (reg->parsed()) {
      cli::HttpGateway gw(g.node);
      std::optional<std::string> bound;
      if (!reg_bound.empty()) bound = reg_bound;
      const auto r = gw.request_registration(
          careflow::registration_request(reg_user, require_role(reg_role), reg_name, bound));
      Json j = receipt_json(r);
      j["pending_id"] = reg_user;
      emit(g, j, "registration of '" + reg_user + "' is pending approval");
    } else if (pending->parsed()) {
      auto c = connect(g);
      const auto list = c.gateway->pending();
      std::string text;
      for (const auto& u : list) {
        text += u.user_id + "\t" + std::string(to_string(u.role)) + "\t" + u.display_name + "\n";
      }
      emit(g, records_json(list), text.empty() ? "no pending registrations" : text.substr(0, text.size() - 1));
    } else if (approve->parsed()) {
      auto c = connect(g);
      const crypto::KeyPair kp = c.client->approve_registration(approve_id);
      crypto::save_keyfile(approve_out, kp);
      emit(g,
           Json{{"user_id", kp.user_id},
                {"keyfile", approve_out},
                {"sign_public", kp.sign_public.hex()},
                {"enc_public", kp.enc_public.hex()}},
           "approved '" + kp.user_id + "'; keyfile written to " + approve_out);
    } else if (login->parsed()) {
      auto c = connect(g);
      emit(g, Json{{"user_id", c.client->user_id()}, {"token", c.gateway->token()}},
           "logged in as " + c.client->user_id());
    } else if (upload->parsed()) {
      auto c = connect(g);
      const std::string bytes = read_binary(up_file);
      const std::string owner = up_owner.empty() ? c.client->user_id() : up_owner;
      const ContentHash h = c.client->upload_file(crypto::as_bytes(bytes), require_kind(up_kind),
                                                  owner, split_csv(up_share));
      emit(g, Json{{"content_hash", h.hex()}}, h.hex());
    } else if (fetch->parsed()) {
      auto c = connect(g);
      const crypto::Bytes bytes = c.client->fetch_file(require_digest(fetch_hash));
      if (fetch_out.empty()) {
        std::cout.write(reinterpret_cast<const char*>(bytes.data()),
                        static_cast<std::streamsize>(bytes.size()));
      } else {
        write_binary(fetch_out, bytes);
        emit(g, Json{{"bytes", bytes.size()}, {"out", fetch_out}},
             "wrote " + std::to_string(bytes.size()) + " bytes to " + fetch_out);
      }
    } else if (share->parsed()) {
      auto c = connect(g);
      const auto r = c.client->share_file(require_digest(share_hash), share_to);
      emit(g, receipt_json(r), receipt_text(r));
    } else if (revoke->parsed()) {
      auto c = connect(g);
      const auto r = c.client->revoke(require_digest(revoke_hash), revoke_from);
      emit(g, receipt_json(r), receipt_text(r));
    } else if (integrity->parsed()) {
      auto c = connect(g);
      const auto report = c.client->check_integrity(require_digest(integ_hash));
      emit(g, service::to_json(report), std::string(report.message()));
      if (!report.ok()) return 1;
    } else if (physicians->parsed()) {
      auto c = connect(g);
      const auto list = c.client->physicians();
      std::string text;
      for (const auto& u : list) text += u.user_id + "\t" + u.display_name + "\n";
      emit(g, records_json(list), text.empty() ? "no physicians" : text.substr(0, text.size() - 1));
    } else if (files->parsed()) {
      auto c = connect(g);
      std::optional<std::string> p;
      if (!files_patient.empty()) p = files_patient;
      const auto list = c.gateway->files(p);
      std::string text;
      for (const auto& f : list) {
        text += f.content_hash.hex() + "\t" + std::string(to_string(f.kind)) + "\t" + f.owner_patient + "\n";
      }
      emit(g, records_json(list), text.empty() ? "no files" : text.substr(0, text.size() - 1));
    } else if (request_dose->parsed()) {
      auto c = connect(g);
      std::optional<ContentHash> motion;
      if (!rd_motion.empty()) motion = require_digest(rd_motion);
      const auto o = c.client->request_dose(motion, rd_note);
      emit(g, outcome_json(o),
           "request " + o.request_id.hex() + " is " + std::string(to_string(o.status)));
    } else if (requests->parsed()) {
      auto c = connect(g);
      std::optional<std::string> p;
      if (!req_patient.empty()) p = req_patient;
      const auto list = c.gateway->dose_requests(p);
      std::string text;
      for (const auto& r : list) {
        text += r.id.hex() + "\t" + r.patient_id + "\t" + std::string(to_string(r.status)) + "\n";
      }
      emit(g, records_json(list), text.empty() ? "no dose requests" : text.substr(0, text.size() - 1));
    } else if (prescribe->parsed()) {
      if (!rx_confirm && !rx_override) {
        throw careflow::ValidationError("pass --confirm or --override");
      }
      auto c = connect(g);
      const ContentHash rx = c.client->prescribe(
          require_digest(rx_request), rx_confirm ? Decision::confirmed : Decision::overridden,
          rx_dose);
      emit(g, Json{{"prescription_file", rx.hex()}}, "prescription " + rx.hex());
    } else if (em_request->parsed()) {
      auto c = connect(g);
      const auto o = c.client->emergency_request(em_note);
      Json j{{"request_id", o.request_id.hex()}, {"routed_to_physician", o.routed_to_physician}};
      if (o.cap_mg) j["cap_mg"] = *o.cap_mg;
      emit(g, j,
           o.routed_to_physician
               ? "NoCap: no approved dose on record; request " + o.request_id.hex() +
                     " routed to a physician"
               : "emergency request " + o.request_id.hex() + " is waiting for a nurse");
    } else if (em_decide->parsed()) {
      if (!em_approve && !em_deny) throw careflow::ValidationError("pass --approve or --deny");
      auto c = connect(g);
      const auto r = c.client->emergency_decide(require_digest(em_id), em_approve, em_dose);
      emit(g, receipt_json(r), receipt_text(r));
    } else if (chain_verify->parsed()) {
      ledger::ChainReport report;
      if (!verify_log.empty()) {
        report = ledger::verify_log_file(verify_log);
      } else {
        cli::HttpGateway gw(g.node);
        report = gw.verify_chain();
      }
      emit(g, report.to_json(), report_text(report));
      if (!report.valid) return 1;
    } else if (chain_replay->parsed()) {
      const std::string bytes = ledger::read_file(replay_log);
      const ledger::ChainReport report = ledger::verify_log_bytes(bytes);
      if (!report.valid) {
        emit(g, report.to_json(), report_text(report));
        return 1;
      }
      const auto blocks = ledger::parse_log(bytes);
      const auto state = ledger::replay(blocks);
      emit(g,
           Json{{"height", blocks.back().height},
                {"tip_hash", blocks.back().block_hash.hex()},
                {"state_digest", contract::state_digest(state).hex()}},
           "height " + std::to_string(blocks.back().height) + ", state digest " +
               contract::state_digest(state).hex());
    } else if (simulate->parsed()) {
      sim.joints = split_csv(sim_joints);
      if (sim_dry) {
        if (sim.device_id.empty()) sim.device_id = "simulator";
        const std::string motion = careflow::serialize_motion(cli::simulate_device(sim));
        if (sim_out.empty()) {
          std::cout << motion << "\n";
        } else {
          write_binary(sim_out, crypto::as_bytes(motion));
        }
      } else {
        auto c = connect(g);
        sim.device_id = c.client->user_id();
        const auto mc = cli::simulate_device(sim);
        const ContentHash h = c.client->ingest_motion(mc);
        emit(g, Json{{"content_hash", h.hex()}, {"samples", mc.samples.size()}}, h.hex());
      }
    } else if (features->parsed()) {
      const auto mc = careflow::parse_motion(read_binary(feat_file));
      const auto f = careflow::extract_features(mc);
      std::string text;
      for (std::size_t j = 0; j < f.joints(); ++j) {
        std::ostringstream os;
        os << mc.joint_names[j] << "\tmean " << f.mean_deg(j) << "\tstd " << f.std_deg(j)
           << "\tmean_abs_delta " << f.mean_abs_delta_deg(j) << "\n";
        text += os.str();
      }
      emit(g, Json{{"joints", mc.joint_names}, {"features", careflow::to_json(f)}},
           text.substr(0, text.size() - 1));
    }
  } catch (const cli::TransportError& e) {
    return fail(g, 3, "Unreachable", e.what());
  } catch (const contract::ContractError& e) {
    return fail(g, 2, contract::to_string(e.code()), e.what());
  } catch (const careflow::AccessDenied& e) {
    return fail(g, 2, "AccessDenied", e.what());
  } catch (const careflow::IntegrityError& e) {
    return fail(g, 1, "IntegrityError", e.what());
  } catch (const careflow::ValidationError& e) {
    return fail(g, 2, "ValidationError", e.what());
  } catch (const crypto::CryptoError& e) {
    return fail(g, 2, "CryptoError", e.what());
  } catch (const std::exception& e) {
    return fail(g, 4, "Error", e.what());
  }
  return 0;
}
