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

#include "careledger/service/node.hpp"

#include <algorithm>

#include "careledger/crypto/keyfile.hpp"

namespace careledger::service {

using contract::ContractError;
using contract::Errc;

struct Node::Ticket {
  bool done = false;
  careflow::Receipt receipt;
  std::exception_ptr error;
};

namespace {

// Auto approvals in a row at the end of the patient's routine history.
std::uint32_t trailing_auto(const contract::ContractState& s, const std::string& patient) {
  std::vector<const contract::DoseRequest*> decided;
  for (const auto& [_, r] : s.dose_requests) {
    if (r.patient_id == patient && r.kind == DoseRequestKind::routine && r.decided_at_ms) {
      decided.push_back(&r);
    }
  }
  std::stable_sort(decided.begin(), decided.end(), [](const auto* a, const auto* b) {
    return *a->decided_at_ms < *b->decided_at_ms;
  });
  std::uint32_t run = 0;
  for (auto it = decided.rbegin();
       it != decided.rend() && (*it)->status == DoseRequestStatus::auto_approved; ++it) {
    ++run;
  }
  return run;
}

}  // namespace

Node::Node(NodeConfig cfg, careflow::Clock clock)
    : cfg_((cfg.validate(), std::move(cfg))),
      clock_(std::move(clock)),
      store_((std::filesystem::create_directories(cfg_.data_dir), cfg_.blob_root())) {
  const auto path = cfg_.chain_path();
  contract::ContractState state;
  const bool existing = std::filesystem::exists(path) && std::filesystem::file_size(path) > 0;
  if (existing) {
    const std::string bytes = ledger::read_file(path);
    ledger::ChainReport report = ledger::verify_log_bytes(bytes);
    if (!report.valid) throw StartupError(std::move(report));
    const std::vector<ledger::Block> blocks = ledger::parse_log(bytes);
    state = ledger::replay(blocks);
    tip_ = blocks.back();
    log_ = std::make_unique<ledger::ChainLog>(path, cfg_.fsync);
  } else {
    const auto keyfile = cfg_.admin_keyfile_path();
    crypto::KeyPair admin = std::filesystem::exists(keyfile)
                                ? crypto::load_keyfile(keyfile)
                                : crypto::generate_keypair(cfg_.admin_id);
    if (!std::filesystem::exists(keyfile)) {
      std::filesystem::create_directories(std::filesystem::absolute(keyfile).parent_path());
      crypto::save_keyfile(keyfile, admin);
    }
    const Transaction tx = make_signed(
        admin.user_id, admin.sign_private, clock_(),
        RegisterUser{admin.user_id, Role::admin, cfg_.admin_display_name, admin.sign_public,
                     admin.enc_public, std::nullopt});
    tip_ = ledger::genesis(tx, clock_());
    state = contract::apply(state, tx);
    log_ = std::make_unique<ledger::ChainLog>(path, cfg_.fsync);
    log_->append(tip_);
  }
  projected_ = state;
  snapshot_ = std::make_shared<const Snapshot>(Snapshot{std::move(state), tip_.height, tip_.block_hash});
  if (cfg_.seal_interval_ms > 0) sealer_ = std::thread(&Node::sealer_loop, this);
}

Node::~Node() { shutdown(); }

std::shared_ptr<const Snapshot> Node::snapshot() const {
  std::lock_guard lk(snap_m_);
  return snapshot_;
}

void Node::check_policy(const Transaction& tx) const {
  if (const auto* open = std::get_if<OpenDoseRequest>(&tx.payload)) {
    const DoseSuggestion& s = open->suggestion;
    if (s.auto_approve && !(s.similarity && *s.similarity <= cfg_.tau)) {
      throw ContractError(Errc::policy, "auto suggestion with similarity above tau " +
                                            std::to_string(cfg_.tau));
    }
    if (s.auto_approve && cfg_.max_consecutive_auto > 0 &&
        trailing_auto(projected_, open->patient) >= cfg_.max_consecutive_auto) {
      throw ContractError(Errc::policy, "consecutive auto approval limit reached");
    }
  }
  if (const auto* rx = std::get_if<RecordPrescription>(&tx.payload)) {
    if (rx->decision == Decision::automatic && cfg_.max_consecutive_auto > 0 &&
        trailing_auto(projected_, rx->patient) >= cfg_.max_consecutive_auto) {
      throw ContractError(Errc::policy, "consecutive auto approval limit reached");
    }
  }
}

careflow::Receipt Node::submit(const Transaction& tx) {
  std::unique_lock lk(m_);
  if (stopping_) throw std::runtime_error("node is shutting down");
  check_policy(tx);
  contract::apply_in_place(projected_, tx);
  return enqueue_and_wait(lk, tx);
}

careflow::Receipt Node::submit_file(crypto::ByteView blob, const Transaction& store_tx) {
  const auto* p = std::get_if<StoreFileHash>(&store_tx.payload);
  if (p == nullptr) throw ContractError(Errc::invalid_payload, "expected a store_file_hash transaction");
  if (crypto::content_hash(blob) != p->content_hash) {
    throw ContractError(Errc::invalid_payload, "blob does not hash to the announced content_hash");
  }

  std::unique_lock lk(m_);
  if (stopping_) throw std::runtime_error("node is shutting down");
  contract::apply_in_place(projected_, store_tx);
  try {
    store_.put(blob);
  } catch (...) {
    // Nothing reached the ledger; take the transaction back out.
    projected_ = snapshot()->state;
    for (const auto& tx : pending_) contract::apply_in_place(projected_, tx);
    throw;
  }
  return enqueue_and_wait(lk, store_tx);
}

careflow::Receipt Node::enqueue_and_wait(std::unique_lock<std::mutex>& lk, const Transaction& tx) {
  auto ticket = std::make_shared<Ticket>();
  pending_.push_back(tx);
  tickets_.push_back(ticket);
  if (cfg_.seal_interval_ms == 0) {
    seal_locked();
  } else {
    sealed_.wait(lk, [&] { return ticket->done; });
  }
  if (ticket->error) std::rethrow_exception(ticket->error);
  return ticket->receipt;
}

void Node::seal_locked() {
  if (pending_.empty()) return;
  std::vector<Transaction> batch = std::move(pending_);
  std::vector<std::shared_ptr<Ticket>> tickets = std::move(tickets_);
  pending_.clear();
  tickets_.clear();

  const auto base = snapshot();
  try {
    ledger::Sealed sealed = ledger::seal_block(tip_, base->state, batch, clock_());
    log_->append(sealed.block);
    tip_ = std::move(sealed.block);
    auto next = std::make_shared<const Snapshot>(
        Snapshot{std::move(sealed.state), tip_.height, tip_.block_hash});
    {
      std::lock_guard sl(snap_m_);
      snapshot_ = std::move(next);
    }
    for (std::size_t i = 0; i < batch.size(); ++i) {
      tickets[i]->receipt = careflow::Receipt{batch[i].tx_id, tip_.height};
    }
  } catch (const ledger::SealError& e) {
    // Cannot happen while every submission is validated against projected_;
    // fail the whole batch rather than guess.
    const auto err = std::make_exception_ptr(ContractError(e.code(), e.what()));
    for (auto& t : tickets) t->error = err;
    projected_ = base->state;
  } catch (...) {
    const auto err = std::current_exception();
    for (auto& t : tickets) t->error = err;
    projected_ = base->state;
  }
  for (auto& t : tickets) t->done = true;
  sealed_.notify_all();
}

void Node::sealer_loop() {
  std::unique_lock lk(m_);
  const auto interval = std::chrono::milliseconds(cfg_.seal_interval_ms);
  while (!stopping_) {
    wake_sealer_.wait_for(lk, interval, [&] { return stopping_; });
    seal_locked();
  }
  seal_locked();
}

void Node::flush() {
  std::lock_guard lk(m_);
  seal_locked();
}

void Node::shutdown() {
  {
    std::lock_guard lk(m_);
    if (stopping_ && !sealer_.joinable()) return;
    stopping_ = true;
  }
  wake_sealer_.notify_all();
  if (sealer_.joinable()) sealer_.join();
  std::lock_guard lk(m_);
  seal_locked();
}

ledger::ChainReport Node::verify_chain() const {
  std::string bytes;
  {
    std::lock_guard lk(m_);
    bytes = ledger::read_file(cfg_.chain_path());
  }
  return ledger::verify_log_bytes(bytes);
}

}  // namespace careledger::service
