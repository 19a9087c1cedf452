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

// The node: owns the blob store, chain.log and the contract state, and is the
// single appender to the ledger.
//
// Submissions are validated against the projected state (sealed state plus
// everything still pending) and queued; the sealer turns the queue into one
// block every seal_interval_ms. A submitter blocks until its block is on disk.

#pragma once

#include <condition_variable>
#include <memory>
#include <mutex>
#include <thread>
#include <vector>

#include "careledger/careflow/client.hpp"
#include "careledger/castore/blob_store.hpp"
#include "careledger/ledger/chain.hpp"
#include "careledger/service/config.hpp"

namespace careledger::service {

class StartupError : public std::runtime_error {
 public:
  explicit StartupError(ledger::ChainReport report)
      : std::runtime_error("chain.log does not verify at height " +
                           std::to_string(report.first_bad_height.value_or(0)) + ": " +
                           report.reason),
        report_(std::move(report)) {}
  const ledger::ChainReport& report() const { return report_; }

 private:
  ledger::ChainReport report_;
};

struct Snapshot {
  contract::ContractState state;
  std::uint64_t height = 0;
  Digest tip_hash;
};

class Node {
 public:
  // Loads and verifies chain.log, or mints the genesis block on an empty data
  // directory. Throws StartupError if the log does not verify.
  explicit Node(NodeConfig cfg, careflow::Clock clock = now_ms);
  ~Node();
  Node(const Node&) = delete;
  Node& operator=(const Node&) = delete;

  const NodeConfig& config() const { return cfg_; }
  std::shared_ptr<const Snapshot> snapshot() const;
  castore::BlobStore& store() { return store_; }

  careflow::Receipt submit(const Transaction& tx);
  // The blob must hash to the transaction's content_hash. It is stored only
  // after the transaction validates.
  careflow::Receipt submit_file(crypto::ByteView blob, const Transaction& store_tx);

  void flush();
  // Seals what is pending and stops accepting submissions.
  void shutdown();

  ledger::ChainReport verify_chain() const;

 private:
  struct Ticket;

  void check_policy(const Transaction& tx) const;
  careflow::Receipt enqueue_and_wait(std::unique_lock<std::mutex>& lk, const Transaction& tx);
  void seal_locked();
  void sealer_loop();

  NodeConfig cfg_;
  careflow::Clock clock_;
  castore::BlobStore store_;
  std::unique_ptr<ledger::ChainLog> log_;

  mutable std::mutex m_;  // everything below except snapshot_
  std::condition_variable wake_sealer_;
  std::condition_variable sealed_;
  ledger::Block tip_;
  contract::ContractState projected_;
  std::vector<Transaction> pending_;
  std::vector<std::shared_ptr<Ticket>> tickets_;
  bool stopping_ = false;
  std::thread sealer_;

  mutable std::mutex snap_m_;
  std::shared_ptr<const Snapshot> snapshot_;
};

}  // namespace careledger::service
