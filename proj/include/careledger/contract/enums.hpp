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

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace careledger {

enum class Role { patient, physician, nurse, iot_device, admin };

enum class FileKind { medical_history, motion_capture, prescription, dose_request };

enum class UserStatus { pending, active };

enum class DoseRequestKind { routine, emergency };

enum class DoseRequestStatus {
  pending_physician,
  auto_approved,
  physician_confirmed,
  physician_overridden,
  emergency_pending,
  emergency_decided,
};

enum class Decision { confirmed, overridden, automatic };

inline constexpr std::array<Role, 5> kAllRoles = {Role::patient, Role::physician, Role::nurse,
                                                  Role::iot_device, Role::admin};
inline constexpr std::array<FileKind, 4> kAllFileKinds = {
    FileKind::medical_history, FileKind::motion_capture, FileKind::prescription,
    FileKind::dose_request};

std::string_view to_string(Role r);
std::string_view to_string(FileKind k);
std::string_view to_string(UserStatus s);
std::string_view to_string(DoseRequestKind k);
std::string_view to_string(DoseRequestStatus s);
std::string_view to_string(Decision d);  // "confirmed" | "overridden" | "auto"

// nullopt on an unknown name.
std::optional<Role> parse_role(std::string_view s);
std::optional<FileKind> parse_file_kind(std::string_view s);
std::optional<UserStatus> parse_user_status(std::string_view s);
std::optional<DoseRequestKind> parse_dose_request_kind(std::string_view s);
std::optional<DoseRequestStatus> parse_dose_request_status(std::string_view s);
// Accepts "confirm"/"override" as aliases, as typed on the command line.
std::optional<Decision> parse_decision(std::string_view s);

}  // namespace careledger
