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

#include "careledger/service/wire.hpp"

namespace careledger::service {

Json to_json(const careflow::NodeStatus& s) {
  return Json{{"height", s.height},
              {"tip_hash", s.tip_hash.hex()},
              {"tau", s.tau},
              {"max_consecutive_auto", s.max_consecutive_auto}};
}

careflow::NodeStatus status_from_json(const Json& j) {
  careflow::NodeStatus s;
  s.height = jf::u64(j, "height");
  s.tip_hash = jf::digest(j, "tip_hash");
  s.tau = jf::num(j, "tau");
  s.max_consecutive_auto = static_cast<std::uint32_t>(jf::u64(j, "max_consecutive_auto"));
  return s;
}

Json to_json(const careflow::Receipt& r) {
  return Json{{"tx_id", r.tx_id.hex()}, {"height", r.height}};
}

careflow::Receipt receipt_from_json(const Json& j) {
  return careflow::Receipt{jf::digest(j, "tx_id"), jf::u64(j, "height")};
}

Json to_json(const contract::IntegrityReport& r) {
  Json j{{"store_level", r.store_level}, {"ok", r.ok()}, {"message", std::string(r.message())}};
  if (r.end_to_end) j["end_to_end"] = *r.end_to_end;
  return j;
}

contract::IntegrityReport integrity_from_json(const Json& j) {
  contract::IntegrityReport r;
  r.store_level = jf::boolean(j, "store_level");
  if (jf::has(j, "end_to_end")) r.end_to_end = jf::boolean(j, "end_to_end");
  return r;
}

Json error_body(std::string_view code, std::string_view message) {
  return Json{{"error", std::string(code)}, {"message", std::string(message)}};
}

}  // namespace careledger::service
