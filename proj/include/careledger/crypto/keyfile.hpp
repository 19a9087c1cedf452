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

#include <filesystem>
#include <string>

#include "careledger/crypto/crypto.hpp"

namespace careledger::crypto {

// Keyfile on disk: canonical JSON
//   {"enc_private":hex,"enc_public":hex,"sign_private":hex,"sign_public":hex,"user_id":str}
// The public halves are re-derived on load and must match.
std::string keyfile_json(const KeyPair& kp);
KeyPair parse_keyfile(std::string_view json);

// Written with owner-only permissions (0600), replacing any existing file.
void save_keyfile(const std::filesystem::path& path, const KeyPair& kp);
KeyPair load_keyfile(const std::filesystem::path& path);

}  // namespace careledger::crypto
