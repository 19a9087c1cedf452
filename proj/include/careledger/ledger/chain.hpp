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

// Hash-chained blocks.
//
//   block_hash = SHA-256( LE64(height) || prev_hash || LE64(timestamp_ms) ||
//                         SHA-256(canonical JSON array of the transactions) )
//
// The persisted log (chain.log) holds one canonical-JSON block per line and
// only ever grows.

#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "careledger/contract/contract.hpp"
#include "careledger/ledger/transaction.hpp"

namespace careledger::ledger {

struct Block {
  std::uint64_t height = 0;
  Digest prev_hash;
  std::int64_t timestamp_ms = 0;
  std::vector<Transaction> transactions;
  Digest block_hash;

  bool operator==(const Block&) const = default;
};

Digest transactions_digest(const std::vector<Transaction>& txs);
Digest compute_block_hash(std::uint64_t height, const Digest& prev_hash, std::int64_t timestamp_ms,
                          const Digest& txs_digest);
Digest compute_block_hash(const Block& b);

Json to_json(const Block& b);
std::string serialize_block(const Block& b);  // canonical, no trailing newline
Block parse_block(std::string_view line);      // FormatError on malformed input

class SealError : public std::runtime_error {
 public:
  SealError(TxId offending, contract::Errc code, const std::string& what)
      : std::runtime_error(what), offending_(offending), code_(code) {}
  const TxId& offending_tx() const { return offending_; }
  contract::Errc code() const { return code_; }

 private:
  TxId offending_;
  contract::Errc code_;
};

// The admin's self-registration as block 0. Anything else is a SealError.
Block genesis(const Transaction& admin_registration, std::int64_t timestamp_ms);

struct Sealed {
  Block block;
  contract::ContractState state;
};

// All-or-nothing: the first transaction that does not apply aborts the batch
// and is named in the SealError. The block timestamp is clamped to be no
// earlier than the tip's.
Sealed seal_block(const Block& tip, const contract::ContractState& tip_state,
                  std::vector<Transaction> pending, std::int64_t timestamp_ms);

struct ChainReport {
  bool valid = true;
  std::optional<std::uint64_t> first_bad_height;
  std::string reason;

  Json to_json() const;
};

// Recomputes every hash and link and replays every transaction, so every
// signature is checked against the registry as it stood at that point.
ChainReport verify_chain(const std::vector<Block>& blocks);

// Verifies the raw bytes of a persisted log. Line i is block i; each line
// must be the exact canonical serialization of its block and the file must
// end with a newline.
ChainReport verify_log_bytes(std::string_view bytes);
ChainReport verify_log_file(const std::filesystem::path& path);

// Left fold of contract::apply. Throws if a transaction does not apply,
// which for a verified chain cannot happen.
contract::ContractState replay(const std::vector<Block>& blocks);

// Parses every line; FormatError on the first malformed one. Does not verify.
std::vector<Block> parse_log(std::string_view bytes);
std::string read_file(const std::filesystem::path& path);

// Append-only writer for chain.log.
class ChainLog {
 public:
  ChainLog(std::filesystem::path path, bool fsync_each = true);
  ~ChainLog();
  ChainLog(const ChainLog&) = delete;
  ChainLog& operator=(const ChainLog&) = delete;

  void append(const Block& b);
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  bool fsync_each_;
  int fd_ = -1;
};

}  // namespace careledger::ledger
