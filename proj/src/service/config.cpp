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

#include "careledger/service/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace careledger::service {

void NodeConfig::validate() const {
  if (!(tau > 0) || !std::isfinite(tau)) throw ConfigError("tau must be a positive number");
  if (seal_interval_ms < 0) throw ConfigError("seal_interval_ms must not be negative");
  if (session_ttl_ms <= 0) throw ConfigError("session_ttl_ms must be positive");
  if (data_dir.empty()) throw ConfigError("data_dir is empty");
  if (admin_id.empty()) throw ConfigError("admin_id is empty");
}

void set_listen(NodeConfig& cfg, std::string_view listen) {
  const auto colon = listen.rfind(':');
  if (colon == std::string_view::npos || colon == 0) {
    throw ConfigError("listen must be host:port, got '" + std::string(listen) + "'");
  }
  const std::string_view port = listen.substr(colon + 1);
  unsigned value = 0;
  auto [end, ec] = std::from_chars(port.data(), port.data() + port.size(), value);
  if (ec != std::errc() || end != port.data() + port.size() || value > 65535) {
    throw ConfigError("bad port in '" + std::string(listen) + "'");
  }
  cfg.listen_host = std::string(listen.substr(0, colon));
  cfg.listen_port = static_cast<std::uint16_t>(value);
}

NodeConfig parse_config(std::string_view json, NodeConfig cfg) {
  static const std::set<std::string> known = {
      "listen", "data_dir", "seal_interval_ms", "tau", "max_consecutive_auto",
      "session_ttl_ms", "fsync", "admin_id", "admin_display_name", "admin_keyfile"};
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  try {
    for (const auto& [key, value] : j.items()) {
      if (!known.contains(key)) throw ConfigError("unknown config key '" + key + "'");
      if (key == "listen") set_listen(cfg, value.get<std::string>());
      if (key == "data_dir") cfg.data_dir = value.get<std::string>();
      if (key == "seal_interval_ms") cfg.seal_interval_ms = value.get<std::int64_t>();
      if (key == "tau") cfg.tau = value.get<double>();
      if (key == "max_consecutive_auto") cfg.max_consecutive_auto = value.get<std::uint32_t>();
      if (key == "session_ttl_ms") cfg.session_ttl_ms = value.get<std::int64_t>();
      if (key == "fsync") cfg.fsync = value.get<bool>();
      if (key == "admin_id") cfg.admin_id = value.get<std::string>();
      if (key == "admin_display_name") cfg.admin_display_name = value.get<std::string>();
      if (key == "admin_keyfile") cfg.admin_keyfile = value.get<std::string>();
    }
  } catch (const nlohmann::json::type_error& e) {
    throw ConfigError(std::string("config value has the wrong type: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

NodeConfig load_config(const std::filesystem::path& path, NodeConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), std::move(base));
}

}  // namespace careledger::service
