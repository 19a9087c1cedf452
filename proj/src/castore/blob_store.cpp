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

#include "careledger/castore/blob_store.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <atomic>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <system_error>

namespace careledger::castore {

namespace fs = std::filesystem;

namespace {

constexpr const char* kTmpDir = ".tmp";

[[noreturn]] void throw_io(const std::string& what, int err) {
  throw StoreError(StoreErrc::io, what + ": " + std::strerror(err));
}

void write_all(int fd, ByteView data, const fs::path& path) {
  std::size_t off = 0;
  while (off < data.size()) {
    const ssize_t n = ::write(fd, data.data() + off, data.size() - off);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw_io("write " + path.string(), errno);
    }
    off += static_cast<std::size_t>(n);
  }
}

void fsync_dir(const fs::path& dir) {
  const int fd = ::open(dir.c_str(), O_RDONLY | O_DIRECTORY | O_CLOEXEC);
  if (fd >= 0) {
    ::fsync(fd);
    ::close(fd);
  }
}

std::string unique_tmp_name() {
  static std::atomic<std::uint64_t> counter{0};
  return std::to_string(::getpid()) + "-" + std::to_string(counter++) + "-" +
         crypto::to_hex(crypto::random_bytes(8));
}

bool is_hex_name(const std::string& s, std::size_t len) {
  if (s.size() != len) return false;
  for (char c : s) {
    if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'))) return false;
  }
  return true;
}

Bytes read_file(const fs::path& path, const ContentHash& hash) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::error_code ec;
    if (!fs::exists(path, ec)) {
      throw StoreError(StoreErrc::not_found, "blob not found: " + hash.hex());
    }
    throw StoreError(StoreErrc::io, "cannot open " + path.string());
  }
  in.seekg(0, std::ios::end);
  const auto size = static_cast<std::size_t>(in.tellg());
  in.seekg(0, std::ios::beg);
  Bytes out(size);
  if (size > 0 && !in.read(reinterpret_cast<char*>(out.data()),
                           static_cast<std::streamsize>(size))) {
    throw StoreError(StoreErrc::io, "short read on " + path.string());
  }
  return out;
}

}  // namespace

BlobStore::BlobStore(fs::path root) : root_(std::move(root)) {
  std::error_code ec;
  fs::create_directories(root_ / kTmpDir, ec);
  if (ec) {
    throw StoreError(StoreErrc::io,
                     "cannot create store at " + root_.string() + ": " + ec.message());
  }
}

fs::path BlobStore::path_for(const ContentHash& hash) const {
  const std::string hex = hash.hex();
  return root_ / hex.substr(0, 2) / hex.substr(2);
}

ContentHash BlobStore::put(ByteView blob) {
  if (blob.empty()) {
    throw StoreError(StoreErrc::empty_blob, "refusing to store an empty blob");
  }
  const ContentHash hash = crypto::content_hash(blob);
  const fs::path dest = path_for(hash);

  std::error_code ec;
  if (fs::exists(dest, ec)) {
    // Already present. A damaged copy is replaced rather than trusted.
    try {
      if (crypto::content_hash(read_file(dest, hash)) == hash) return hash;
    } catch (const StoreError&) {
    }
  }

  fs::create_directories(dest.parent_path(), ec);
  if (ec) {
    throw StoreError(StoreErrc::io, "cannot create " + dest.parent_path().string() +
                                        ": " + ec.message());
  }

  const fs::path tmp = root_ / kTmpDir / unique_tmp_name();
  const int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_EXCL | O_CLOEXEC, 0644);
  if (fd < 0) throw_io("create " + tmp.string(), errno);
  try {
    write_all(fd, blob, tmp);
    if (::fsync(fd) != 0) throw_io("fsync " + tmp.string(), errno);
  } catch (...) {
    ::close(fd);
    ::unlink(tmp.c_str());
    throw;
  }
  ::close(fd);

  if (::rename(tmp.c_str(), dest.c_str()) != 0) {
    const int err = errno;
    ::unlink(tmp.c_str());
    throw_io("rename into " + dest.string(), err);
  }
  fsync_dir(dest.parent_path());
  return hash;
}

Bytes BlobStore::read_raw(const ContentHash& hash) const {
  return read_file(path_for(hash), hash);
}

Bytes BlobStore::get(const ContentHash& hash) const {
  Bytes data = read_raw(hash);
  if (crypto::content_hash(data) != hash) {
    throw StoreError(StoreErrc::corrupt_blob,
                     "blob " + hash.hex() + " does not match its address");
  }
  return data;
}

bool BlobStore::has(const ContentHash& hash) const {
  std::error_code ec;
  return fs::is_regular_file(path_for(hash), ec);
}

std::size_t BlobStore::blob_count() const {
  std::size_t n = 0;
  std::error_code ec;
  for (const auto& dir : fs::directory_iterator(root_, ec)) {
    if (!dir.is_directory() || !is_hex_name(dir.path().filename().string(), 2)) continue;
    for (const auto& f : fs::directory_iterator(dir.path(), ec)) {
      if (f.is_regular_file()) ++n;
    }
  }
  return n;
}

FsckReport BlobStore::fsck() const {
  FsckReport report;
  std::error_code ec;
  for (const auto& dir : fs::directory_iterator(root_, ec)) {
    const std::string prefix = dir.path().filename().string();
    if (prefix == kTmpDir || !dir.is_directory()) continue;
    for (const auto& f : fs::directory_iterator(dir.path(), ec)) {
      const std::string rest = f.path().filename().string();
      const std::string rel = prefix + "/" + rest;
      ++report.blobs_checked;
      if (!is_hex_name(prefix, 2) || !is_hex_name(rest, 62) || !f.is_regular_file()) {
        report.mismatches.push_back(rel);
        continue;
      }
      const ContentHash want = ContentHash::from_hex(prefix + rest);
      try {
        if (crypto::content_hash(read_raw(want)) != want) report.mismatches.push_back(rel);
      } catch (const StoreError&) {
        report.mismatches.push_back(rel);
      }
    }
  }
  return report;
}

}  // namespace careledger::castore
