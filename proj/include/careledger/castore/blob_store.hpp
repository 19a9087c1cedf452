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

// Content-addressed blob store. A blob lives at
//
//   <root>/<first 2 hex chars of sha256>/<remaining 62 chars>
//
// and is written through a temp file in <root>/.tmp followed by rename(2), so
// a blob is either fully visible under its address or absent. Puts of the same
// content race harmlessly: both renames install identical bytes.

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "careledger/crypto/crypto.hpp"

namespace careledger::castore {

using ContentHash = crypto::Digest;
using crypto::ByteView;
using crypto::Bytes;

enum class StoreErrc { not_found, corrupt_blob, empty_blob, io };

class StoreError : public std::runtime_error {
 public:
  StoreError(StoreErrc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  StoreErrc code() const { return code_; }

 private:
  StoreErrc code_;
};

struct FsckReport {
  std::size_t blobs_checked = 0;
  // Paths (relative to the root) whose bytes do not hash to their name, or
  // whose name is not a valid address.
  std::vector<std::string> mismatches;

  bool ok() const { return mismatches.empty(); }
};

class BlobStore {
 public:
  explicit BlobStore(std::filesystem::path root);

  // Idempotent; rejects empty blobs.
  ContentHash put(ByteView blob);

  // Verified read: throws StoreError{not_found} or StoreError{corrupt_blob}.
  Bytes get(const ContentHash& hash) const;

  // Unverified read, for integrity reporting. Throws only on not_found / io.
  Bytes read_raw(const ContentHash& hash) const;

  // Existence of the backing file only. If the file was deleted out from
  // under the store this is false; if it was modified it stays true and get()
  // reports corrupt_blob.
  bool has(const ContentHash& hash) const;

  std::filesystem::path path_for(const ContentHash& hash) const;
  std::size_t blob_count() const;
  FsckReport fsck() const;

  const std::filesystem::path& root() const { return root_; }

 private:
  std::filesystem::path root_;
};

}  // namespace careledger::castore
