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

#include "careledger/ledger/chain.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <set>
#include <sstream>

namespace careledger::ledger {

namespace {

void put_le64(crypto::Sha256& h, std::uint64_t v) {
  std::uint8_t buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<std::uint8_t>(v >> (8 * i));
  h.update(crypto::ByteView(buf, 8));
}

ChainReport bad(std::uint64_t height, std::string reason) {
  return ChainReport{false, height, std::move(reason)};
}

}  // namespace

Digest transactions_digest(const std::vector<Transaction>& txs) {
  Json arr = Json::array();
  for (const auto& tx : txs) arr.push_back(to_json(tx));
  return crypto::content_hash(canonical(arr));
}

Digest compute_block_hash(std::uint64_t height, const Digest& prev_hash, std::int64_t timestamp_ms,
                          const Digest& txs_digest) {
  crypto::Sha256 h;
  put_le64(h, height);
  h.update(prev_hash.view());
  put_le64(h, static_cast<std::uint64_t>(timestamp_ms));
  h.update(txs_digest.view());
  return h.finish();
}

Digest compute_block_hash(const Block& b) {
  return compute_block_hash(b.height, b.prev_hash, b.timestamp_ms,
                            transactions_digest(b.transactions));
}

Json to_json(const Block& b) {
  Json txs = Json::array();
  for (const auto& tx : b.transactions) txs.push_back(to_json(tx));
  Json j;
  j["height"] = b.height;
  j["prev_hash"] = b.prev_hash.hex();
  j["timestamp_ms"] = b.timestamp_ms;
  j["transactions"] = std::move(txs);
  j["block_hash"] = b.block_hash.hex();
  return j;
}

std::string serialize_block(const Block& b) { return canonical(to_json(b)); }

Block parse_block(std::string_view line) {
  const Json j = jf::parse(line);
  Block b;
  b.height = jf::u64(j, "height");
  b.prev_hash = jf::digest(j, "prev_hash");
  b.timestamp_ms = jf::i64(j, "timestamp_ms");
  b.block_hash = jf::digest(j, "block_hash");
  const Json& txs = jf::at(j, "transactions");
  if (!txs.is_array()) throw FormatError("field 'transactions' must be an array");
  for (const auto& t : txs) b.transactions.push_back(transaction_from_json(t));
  return b;
}

Block genesis(const Transaction& admin_registration, std::int64_t timestamp_ms) {
  contract::ContractState empty;
  try {
    contract::apply_in_place(empty, admin_registration);
  } catch (const contract::ContractError& e) {
    throw SealError(admin_registration.tx_id, e.code(), std::string("genesis rejected: ") + e.what());
  }
  Block b;
  b.height = 0;
  b.timestamp_ms = timestamp_ms;
  b.transactions = {admin_registration};
  b.block_hash = compute_block_hash(b);
  return b;
}

Sealed seal_block(const Block& tip, const contract::ContractState& tip_state,
                  std::vector<Transaction> pending, std::int64_t timestamp_ms) {
  if (pending.empty()) {
    throw std::invalid_argument("seal_block needs at least one transaction");
  }
  contract::ContractState state = tip_state;
  for (const auto& tx : pending) {
    try {
      contract::apply_in_place(state, tx);
    } catch (const contract::ContractError& e) {
      throw SealError(tx.tx_id, e.code(),
                      "transaction " + tx.tx_id.hex() + " rejected: " + e.what());
    }
  }
  Block b;
  b.height = tip.height + 1;
  b.prev_hash = tip.block_hash;
  b.timestamp_ms = std::max(timestamp_ms, tip.timestamp_ms);
  b.transactions = std::move(pending);
  b.block_hash = compute_block_hash(b);
  return Sealed{std::move(b), std::move(state)};
}

Json ChainReport::to_json() const {
  Json j;
  j["valid"] = valid;
  if (first_bad_height) j["first_bad_height"] = *first_bad_height;
  if (!reason.empty()) j["reason"] = reason;
  return j;
}

ChainReport verify_chain(const std::vector<Block>& blocks) {
  if (blocks.empty()) return bad(0, "chain is empty");
  contract::ContractState state;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const Block& b = blocks[i];
    if (b.height != i) return bad(i, "height " + std::to_string(b.height) + " at position " + std::to_string(i));
    const Digest expected_prev = i == 0 ? Digest{} : blocks[i - 1].block_hash;
    if (b.prev_hash != expected_prev) return bad(i, "prev_hash does not link to the previous block");
    if (compute_block_hash(b) != b.block_hash) return bad(i, "block_hash mismatch");
    if (i > 0 && b.timestamp_ms < blocks[i - 1].timestamp_ms) return bad(i, "timestamp goes backwards");
    if (b.transactions.empty()) return bad(i, "block has no transactions");
    if (i == 0 && b.transactions.size() != 1) return bad(0, "genesis holds exactly one transaction");
    for (const auto& tx : b.transactions) {
      try {
        contract::apply_in_place(state, tx);
      } catch (const contract::ContractError& e) {
        return bad(i, "transaction " + tx.tx_id.hex() + ": " + e.what());
      } catch (const FormatError& e) {
        return bad(i, "transaction " + tx.tx_id.hex() + ": " + e.what());
      }
    }
  }
  return ChainReport{};
}

ChainReport verify_log_bytes(std::string_view bytes) {
  if (bytes.empty()) return bad(0, "log is empty");
  std::vector<Block> blocks;
  std::size_t start = 0;
  std::uint64_t line_no = 0;
  while (start < bytes.size()) {
    const std::size_t nl = bytes.find('\n', start);
    if (nl == std::string_view::npos) return bad(line_no, "last line is not newline-terminated");
    const std::string_view line = bytes.substr(start, nl - start);
    try {
      Block b = parse_block(line);
      if (serialize_block(b) != line) return bad(line_no, "line is not in canonical form");
      blocks.push_back(std::move(b));
    } catch (const FormatError& e) {
      return bad(line_no, std::string("unparseable block: ") + e.what());
    }
    start = nl + 1;
    ++line_no;
  }
  return verify_chain(blocks);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ChainReport verify_log_file(const std::filesystem::path& path) {
  return verify_log_bytes(read_file(path));
}

std::vector<Block> parse_log(std::string_view bytes) {
  std::vector<Block> blocks;
  std::size_t start = 0;
  while (start < bytes.size()) {
    std::size_t nl = bytes.find('\n', start);
    if (nl == std::string_view::npos) nl = bytes.size();
    blocks.push_back(parse_block(bytes.substr(start, nl - start)));
    start = nl + 1;
  }
  return blocks;
}

contract::ContractState replay(const std::vector<Block>& blocks) {
  contract::ContractState state;
  for (const auto& b : blocks) {
    for (const auto& tx : b.transactions) contract::apply_in_place(state, tx);
  }
  return state;
}

ChainLog::ChainLog(std::filesystem::path path, bool fsync_each)
    : path_(std::move(path)), fsync_each_(fsync_each) {
  fd_ = ::open(path_.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
  if (fd_ < 0) {
    throw std::runtime_error("cannot open " + path_.string() + ": " + std::strerror(errno));
  }
}

ChainLog::~ChainLog() {
  if (fd_ >= 0) {
    ::fsync(fd_);
    ::close(fd_);
  }
}

void ChainLog::append(const Block& b) {
  std::string line = serialize_block(b);
  line.push_back('\n');
  std::size_t off = 0;
  while (off < line.size()) {
    const ssize_t n = ::write(fd_, line.data() + off, line.size() - off);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw std::runtime_error("append to " + path_.string() + " failed: " + std::strerror(errno));
    }
    off += static_cast<std::size_t>(n);
  }
  if (fsync_each_ && ::fsync(fd_) != 0) {
    throw std::runtime_error("fsync of " + path_.string() + " failed: " + std::strerror(errno));
  }
}

}  // namespace careledger::ledger
