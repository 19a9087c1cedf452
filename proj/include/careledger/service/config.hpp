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

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace careledger::service {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct NodeConfig {
  std::string listen_host = "127.0.0.1";
  std::uint16_t listen_port = 8470;
  std::filesystem::path data_dir = "careledger-data";  // chain.log, blobs/
  std::int64_t seal_interval_ms = 500;  // 0 seals every submission at once
  double tau = 0.1;
  std::uint32_t max_consecutive_auto = 0;  // 0: unlimited
  std::int64_t session_ttl_ms = 15 * 60 * 1000;
  bool fsync = true;

  // Used only when minting the genesis block on an empty data directory.
  // The keyfile is created (mode 0600) if it does not exist yet.
  std::string admin_id = "admin";
  std::string admin_display_name = "Administrator";
  std::optional<std::filesystem::path> admin_keyfile;  // default <data_dir>/admin.key

  std::filesystem::path chain_path() const { return data_dir / "chain.log"; }
  std::filesystem::path blob_root() const { return data_dir / "blobs"; }
  std::filesystem::path admin_keyfile_path() const {
    return admin_keyfile.value_or(data_dir / "admin.key");
  }

  // Throws ConfigError.
  void validate() const;
};

// Keys as in NodeConfig: listen ("host:port"), data_dir, seal_interval_ms,
// tau, max_consecutive_auto, session_ttl_ms, fsync, admin_id,
// admin_display_name, admin_keyfile. Unknown keys are an error.
NodeConfig parse_config(std::string_view json, NodeConfig base = {});
NodeConfig load_config(const std::filesystem::path& path, NodeConfig base = {});

// "host:port"; ConfigError on anything else.
void set_listen(NodeConfig& cfg, std::string_view listen);

}  // namespace careledger::service
