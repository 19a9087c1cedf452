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

// A real node in a scratch directory, with careflow clients for each user
// talking to it in-process.

#pragma once

#include <deque>
#include <map>
#include <memory>

#include "careledger/careflow/client.hpp"
#include "careledger/crypto/keyfile.hpp"
#include "careledger/service/node_gateway.hpp"
#include "support/test_util.hpp"

namespace testutil {

using namespace careledger;

inline service::NodeConfig clinic_config(const std::filesystem::path& dir) {
  service::NodeConfig cfg;
  cfg.data_dir = dir;
  cfg.seal_interval_ms = 0;
  cfg.fsync = false;
  return cfg;
}

class Clinic {
 public:
  explicit Clinic(std::function<void(service::NodeConfig&)> tweak = {})
      : node_(make_config(dir_.path(), tweak)),
        admin_(crypto::load_keyfile(node_.config().admin_keyfile_path())) {
    keys_.emplace(admin_.user_id, admin_);
  }

  service::Node& node() { return node_; }
  const std::filesystem::path& dir() const { return dir_.path(); }
  const crypto::KeyPair& keys(const std::string& id) const { return keys_.at(id); }

  careflow::CareClient& client(const std::string& id) {
    auto it = clients_.find(id);
    if (it != clients_.end()) return *it->second;
    gateways_.push_back(std::make_unique<service::NodeGateway>(node_, id));
    auto c = std::make_unique<careflow::CareClient>(*gateways_.back(), keys_.at(id));
    return *clients_.emplace(id, std::move(c)).first->second;
  }
  careflow::CareClient& admin() { return client(admin_.user_id); }

  void request(const std::string& id, Role role, std::optional<std::string> bound = std::nullopt) {
    node_.submit(careflow::registration_request(id, role, "User " + id, std::move(bound)));
  }

  careflow::CareClient& enroll(const std::string& id, Role role,
                               std::optional<std::string> bound = std::nullopt) {
    request(id, role, std::move(bound));
    keys_.insert_or_assign(id, admin().approve_registration(id));
    return client(id);
  }

  // A client for a user the node has never approved (keys made up locally).
  careflow::CareClient& stranger_client(const std::string& id) {
    keys_.insert_or_assign(id, crypto::generate_keypair(id));
    return client(id);
  }

 private:
  static service::NodeConfig make_config(const std::filesystem::path& dir,
                                         const std::function<void(service::NodeConfig&)>& tweak) {
    service::NodeConfig cfg = clinic_config(dir);
    if (tweak) tweak(cfg);
    return cfg;
  }

  TempDir dir_{"clinic"};
  service::Node node_;
  crypto::KeyPair admin_;
  std::map<std::string, crypto::KeyPair> keys_;
  std::deque<std::unique_ptr<service::NodeGateway>> gateways_;
  std::map<std::string, std::unique_ptr<careflow::CareClient>> clients_;
};

inline crypto::ByteView bytes_of(const std::string& s) { return crypto::as_bytes(s); }

inline std::string str_of(const crypto::Bytes& b) { return std::string(crypto::as_chars(b)); }

}  // namespace testutil
