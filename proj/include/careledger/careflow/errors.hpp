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

#include <stdexcept>
#include <string>

#include "careledger/contract/contract.hpp"

namespace careledger::careflow {

// A Deny from authorize_fetch; what() is the contract's reason verbatim.
class AccessDenied : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The blob or the decrypted bytes do not match the hashes on the ledger.
class IntegrityError : public std::runtime_error {
 public:
  IntegrityError(contract::IntegrityReport report, const std::string& what)
      : std::runtime_error(what), report_(report) {}
  const contract::IntegrityReport& report() const { return report_; }

 private:
  contract::IntegrityReport report_;
};

class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class LengthMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace careledger::careflow
