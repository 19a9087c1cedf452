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

// careledger-node: serves the HTTP API over one data directory.
//
// Config comes from --config or $CARELEDGER_CONFIG; --data-dir, --listen and
// --tau override it. SIGINT/SIGTERM seal whatever is pending and exit.

#include <csignal>
#include <cstdlib>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "careledger/service/http_service.hpp"

int main(int argc, char** argv) {
  using namespace careledger;

  CLI::App app{"CareLedger node"};
  std::string config_path, data_dir, listen, admin_keyfile;
  std::optional<double> tau;
  std::optional<std::int64_t> seal_interval;
  if (const char* env = std::getenv("CARELEDGER_CONFIG")) config_path = env;
  app.add_option("--config", config_path, "JSON config file (env CARELEDGER_CONFIG)");
  app.add_option("--data-dir", data_dir, "chain.log and blob store live here");
  app.add_option("--listen", listen, "host:port; port 0 picks a free one");
  app.add_option("--tau", tau, "Similarity threshold for automatic dose suggestions");
  app.add_option("--seal-interval-ms", seal_interval, "Block sealing interval");
  app.add_option("--admin-keyfile", admin_keyfile, "Admin keyfile used for a new chain");
  CLI11_PARSE(app, argc, argv);

  service::NodeConfig cfg;
  try {
    if (!config_path.empty()) cfg = service::load_config(config_path);
    if (!data_dir.empty()) cfg.data_dir = data_dir;
    if (!listen.empty()) service::set_listen(cfg, listen);
    if (tau) cfg.tau = *tau;
    if (seal_interval) cfg.seal_interval_ms = *seal_interval;
    if (!admin_keyfile.empty()) cfg.admin_keyfile = admin_keyfile;
    cfg.validate();
  } catch (const service::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }

  // Signals are taken by a dedicated thread; block them everywhere else first.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  std::unique_ptr<service::Node> node;
  try {
    node = std::make_unique<service::Node>(cfg);
  } catch (const service::StartupError& e) {
    std::cerr << "refusing to start: chain.log is corrupt, first_bad_height="
              << e.report().first_bad_height.value_or(0) << " (" << e.report().reason << ")\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "refusing to start: " << e.what() << "\n";
    return 1;
  }

  service::SessionStore sessions(cfg.session_ttl_ms);
  service::HttpService http(*node, sessions);
  int port = 0;
  try {
    port = http.bind(cfg.listen_host, cfg.listen_port);
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  const auto snap = node->snapshot();
  std::cout << "listening on " << cfg.listen_host << ":" << port << " (height " << snap->height
            << ", data " << cfg.data_dir.string() << ")" << std::endl;

  std::thread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    http.stop();
  });
  http.serve();
  node->shutdown();
  if (waiter.joinable()) {
    // serve() can also return without a signal (socket error); wake the waiter.
    pthread_kill(waiter.native_handle(), SIGTERM);
    waiter.join();
  }
  std::cout << "stopped at height " << node->snapshot()->height << std::endl;
  return 0;
}
