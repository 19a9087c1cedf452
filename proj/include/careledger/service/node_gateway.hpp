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

// careflow::Gateway served straight from a Node, as one viewer. The HTTP
// service builds one per request from the session's user; tests and the
// acceptance harness use it directly.
//
// Read visibility
//   files          owner, uploader, or anyone holding a wrapped key
//   dose requests  the patient; physicians with a care relationship; nurses
//                  see emergency requests of every patient
//   pending        admin only

#pragma once

#include "careledger/careflow/gateway.hpp"
#include "careledger/service/node.hpp"

namespace careledger::service {

class NodeGateway : public careflow::Gateway {
 public:
  NodeGateway(Node& node, std::string viewer) : node_(node), viewer_(std::move(viewer)) {}

  const std::string& viewer() const { return viewer_; }

  careflow::NodeStatus status() override;
  careflow::Receipt submit(const Transaction& tx) override;
  careflow::Receipt submit_file(crypto::ByteView sealed_blob, const Transaction& store_tx) override;
  std::optional<contract::UserRecord> user(const std::string& user_id) override;
  std::vector<contract::UserRecord> users(std::optional<Role> role) override;
  std::vector<contract::UserRecord> pending() override;
  std::optional<contract::FileRecord> file(const ContentHash& h) override;
  std::vector<contract::FileRecord> files(std::optional<std::string> patient) override;
  contract::FetchDecision file_key(const ContentHash& h) override;
  crypto::Bytes open_file(const ContentHash& h, const crypto::FileKey& key) override;
  contract::IntegrityReport integrity(const ContentHash& h,
                                      const std::optional<crypto::FileKey>& key) override;
  std::vector<contract::DoseRequest> dose_requests(std::optional<std::string> patient) override;
  std::optional<double> last_approved_dose(const std::string& patient) override;
  ledger::ChainReport verify_chain() override;

 private:
  Node& node_;
  std::string viewer_;
};

// The same visibility rules, for callers holding a snapshot.
bool file_visible(const contract::FileRecord& f, const std::string& viewer);
bool dose_request_visible(const contract::ContractState& s, const contract::DoseRequest& r,
                          const std::string& viewer);

}  // namespace careledger::service
