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

#include "careledger/crypto/keyfile.hpp"

#include <fcntl.h>
#include <sys/stat.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace careledger::crypto {

namespace {

std::string field(const nlohmann::json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_string()) {
    throw DecodeError(std::string("keyfile: missing string field '") + key + "'");
  }
  return it->get<std::string>();
}

}  // namespace

std::string keyfile_json(const KeyPair& kp) {
  nlohmann::json j;
  j["user_id"] = kp.user_id;
  j["sign_public"] = kp.sign_public.hex();
  j["sign_private"] = kp.sign_private.hex();
  j["enc_public"] = kp.enc_public.hex();
  j["enc_private"] = kp.enc_private.hex();
  return j.dump();
}

KeyPair parse_keyfile(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw DecodeError(std::string("keyfile: ") + e.what());
  }
  if (!j.is_object()) throw DecodeError("keyfile: not a JSON object");

  KeyPair kp;
  kp.user_id = field(j, "user_id");
  if (kp.user_id.empty()) throw DecodeError("keyfile: empty user_id");
  kp.sign_private = SignPrivateKey::from_hex(field(j, "sign_private"));
  kp.enc_private = EncPrivateKey::from_hex(field(j, "enc_private"));
  kp.sign_public = derive_sign_public(kp.sign_private);
  kp.enc_public = derive_enc_public(kp.enc_private);
  if (SignPublicKey::from_hex(field(j, "sign_public")) != kp.sign_public ||
      EncPublicKey::from_hex(field(j, "enc_public")) != kp.enc_public) {
    throw DecodeError("keyfile: public keys do not match private keys");
  }
  return kp;
}

void save_keyfile(const std::filesystem::path& path, const KeyPair& kp) {
  std::string body = keyfile_json(kp);
  body.push_back('\n');
  const int fd = ::open(path.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0600);
  if (fd < 0) {
    throw std::runtime_error("cannot write keyfile " + path.string() + ": " +
                             std::strerror(errno));
  }
  // O_CREAT's mode only applies to new files.
  ::fchmod(fd, 0600);
  std::size_t off = 0;
  while (off < body.size()) {
    const ssize_t n = ::write(fd, body.data() + off, body.size() - off);
    if (n < 0) {
      if (errno == EINTR) continue;
      const int err = errno;
      ::close(fd);
      throw std::runtime_error("cannot write keyfile " + path.string() + ": " +
                               std::strerror(err));
    }
    off += static_cast<std::size_t>(n);
  }
  ::fsync(fd);
  ::close(fd);
  secure_wipe(body.data(), body.size());
}

KeyPair load_keyfile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read keyfile " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  std::string text = ss.str();
  KeyPair kp = parse_keyfile(text);
  secure_wipe(text.data(), text.size());
  return kp;
}

}  // namespace careledger::crypto
