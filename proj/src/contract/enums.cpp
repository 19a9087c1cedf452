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

#include "careledger/contract/enums.hpp"

#include <utility>

namespace careledger {

namespace {

template <typename E, std::size_t N>
using NameTable = std::array<std::pair<E, std::string_view>, N>;

constexpr NameTable<Role, 5> kRoleNames = {{{Role::patient, "patient"},
                                            {Role::physician, "physician"},
                                            {Role::nurse, "nurse"},
                                            {Role::iot_device, "iot_device"},
                                            {Role::admin, "admin"}}};

constexpr NameTable<FileKind, 4> kKindNames = {{{FileKind::medical_history, "medical_history"},
                                                {FileKind::motion_capture, "motion_capture"},
                                                {FileKind::prescription, "prescription"},
                                                {FileKind::dose_request, "dose_request"}}};

constexpr NameTable<UserStatus, 2> kStatusNames = {
    {{UserStatus::pending, "pending"}, {UserStatus::active, "active"}}};

constexpr NameTable<DoseRequestKind, 2> kRequestKindNames = {
    {{DoseRequestKind::routine, "routine"}, {DoseRequestKind::emergency, "emergency"}}};

constexpr NameTable<DoseRequestStatus, 6> kRequestStatusNames = {
    {{DoseRequestStatus::pending_physician, "pending_physician"},
     {DoseRequestStatus::auto_approved, "auto_approved"},
     {DoseRequestStatus::physician_confirmed, "physician_confirmed"},
     {DoseRequestStatus::physician_overridden, "physician_overridden"},
     {DoseRequestStatus::emergency_pending, "emergency_pending"},
     {DoseRequestStatus::emergency_decided, "emergency_decided"}}};

constexpr NameTable<Decision, 3> kDecisionNames = {{{Decision::confirmed, "confirmed"},
                                                    {Decision::overridden, "overridden"},
                                                    {Decision::automatic, "auto"}}};

template <typename E, std::size_t N>
std::string_view name_of(const NameTable<E, N>& table, E v) {
  for (const auto& [e, name] : table) {
    if (e == v) return name;
  }
  return "?";
}

template <typename E, std::size_t N>
std::optional<E> value_of(const NameTable<E, N>& table, std::string_view s) {
  for (const auto& [e, name] : table) {
    if (name == s) return e;
  }
  return std::nullopt;
}

}  // namespace

std::string_view to_string(Role r) { return name_of(kRoleNames, r); }
std::string_view to_string(FileKind k) { return name_of(kKindNames, k); }
std::string_view to_string(UserStatus s) { return name_of(kStatusNames, s); }
std::string_view to_string(DoseRequestKind k) { return name_of(kRequestKindNames, k); }
std::string_view to_string(DoseRequestStatus s) { return name_of(kRequestStatusNames, s); }
std::string_view to_string(Decision d) { return name_of(kDecisionNames, d); }

std::optional<Role> parse_role(std::string_view s) { return value_of(kRoleNames, s); }
std::optional<FileKind> parse_file_kind(std::string_view s) { return value_of(kKindNames, s); }
std::optional<UserStatus> parse_user_status(std::string_view s) {
  return value_of(kStatusNames, s);
}
std::optional<DoseRequestKind> parse_dose_request_kind(std::string_view s) {
  return value_of(kRequestKindNames, s);
}
std::optional<DoseRequestStatus> parse_dose_request_status(std::string_view s) {
  return value_of(kRequestStatusNames, s);
}
std::optional<Decision> parse_decision(std::string_view s) {
  if (s == "confirm") return Decision::confirmed;
  if (s == "override") return Decision::overridden;
  return value_of(kDecisionNames, s);
}

}  // namespace careledger
