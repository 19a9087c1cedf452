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

// Motion captures and the features derived from them.
//
// Wire format: the line "#careledger-motion v1" followed by one canonical
// JSON object
//   {"device_id","joint_names":[..],"patient_id","sample_rate_hz",
//    "samples":[[t_s, a1, a2, ..], ..]}

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "careledger/ledger/json_fields.hpp"

namespace careledger::careflow {

inline constexpr std::string_view kMotionHeader = "#careledger-motion v1\n";

struct MotionSample {
  double t_s = 0;
  std::vector<double> angles_deg;  // one per joint

  bool operator==(const MotionSample&) const = default;
};

struct MotionCapture {
  std::string device_id;
  std::string patient_id;
  std::vector<std::string> joint_names;
  std::vector<MotionSample> samples;
  double sample_rate_hz = 0;

  bool operator==(const MotionCapture&) const = default;
};

// Throws ValidationError naming the first problem.
void validate(const MotionCapture& mc);

std::string serialize_motion(const MotionCapture& mc);   // validates first
MotionCapture parse_motion(std::string_view bytes);      // ValidationError

// Per joint (mean_deg, std_deg, mean_abs_delta_deg), flattened in joint order.
struct FeatureVector {
  std::vector<double> values;

  std::size_t joints() const { return values.size() / 3; }
  double mean_deg(std::size_t j) const { return values[3 * j]; }
  double std_deg(std::size_t j) const { return values[3 * j + 1]; }
  double mean_abs_delta_deg(std::size_t j) const { return values[3 * j + 2]; }
  bool operator==(const FeatureVector&) const = default;
};

// std is the population standard deviation.
FeatureVector extract_features(const MotionCapture& mc);

// sqrt(mean(((a_i - b_i) / (|a_i| + |b_i| + 1e-9))^2)). 0 for identical
// vectors, at most 1. Throws LengthMismatch; two empty vectors are 0.
double similarity(const FeatureVector& a, const FeatureVector& b);

Json to_json(const FeatureVector& f);
FeatureVector feature_vector_from_json(const Json& j);  // FormatError

}  // namespace careledger::careflow
