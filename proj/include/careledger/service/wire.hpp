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

// JSON shapes shared by the HTTP service and its client.

#pragma once

#include "careledger/careflow/gateway.hpp"

namespace careledger::service {

inline constexpr const char* kFileKeyHeader = "X-Careledger-File-Key";

Json to_json(const careflow::NodeStatus& s);
careflow::NodeStatus status_from_json(const Json& j);

Json to_json(const careflow::Receipt& r);  // {"height","tx_id"}
careflow::Receipt receipt_from_json(const Json& j);

// {"end_to_end"?,"message","ok","store_level"}
Json to_json(const contract::IntegrityReport& r);
contract::IntegrityReport integrity_from_json(const Json& j);

// {"error": <code>, "message": ...}
Json error_body(std::string_view code, std::string_view message);

}  // namespace careledger::service
