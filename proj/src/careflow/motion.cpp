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

#include "careledger/careflow/motion.hpp"

#include <cmath>
#include <set>

#include "careledger/careflow/errors.hpp"

namespace careledger::careflow {

namespace {

constexpr double kEpsilon = 1e-9;

[[noreturn]] void invalid(const std::string& what) {
  throw ValidationError("motion capture: " + what);
}

}  // namespace

void validate(const MotionCapture& mc) {
  if (mc.device_id.empty()) invalid("device_id is empty");
  if (mc.patient_id.empty()) invalid("patient_id is empty");
  if (!std::isfinite(mc.sample_rate_hz) || mc.sample_rate_hz <= 0) {
    invalid("sample_rate_hz must be positive");
  }
  if (mc.joint_names.empty()) invalid("no joints");
  std::set<std::string> seen;
  for (const auto& name : mc.joint_names) {
    if (name.empty()) invalid("empty joint name");
    if (!seen.insert(name).second) invalid("duplicate joint '" + name + "'");
  }
  if (mc.samples.size() < 2) invalid("at least 2 samples are required");
  for (std::size_t i = 0; i < mc.samples.size(); ++i) {
    const MotionSample& s = mc.samples[i];
    if (!std::isfinite(s.t_s)) invalid("non-finite t_s at sample " + std::to_string(i));
    if (i > 0 && !(s.t_s > mc.samples[i - 1].t_s)) {
      invalid("t_s is not strictly increasing at sample " + std::to_string(i));
    }
    if (s.angles_deg.size() != mc.joint_names.size()) {
      invalid("sample " + std::to_string(i) + " has " + std::to_string(s.angles_deg.size()) +
              " angles for " + std::to_string(mc.joint_names.size()) + " joints");
    }
    for (double a : s.angles_deg) {
      if (!std::isfinite(a)) invalid("non-finite angle at sample " + std::to_string(i));
    }
  }
}

std::string serialize_motion(const MotionCapture& mc) {
  validate(mc);
  Json samples = Json::array();
  for (const auto& s : mc.samples) {
    Json row = Json::array();
    row.push_back(s.t_s);
    for (double a : s.angles_deg) row.push_back(a);
    samples.push_back(std::move(row));
  }
  Json j = {{"device_id", mc.device_id},
            {"patient_id", mc.patient_id},
            {"sample_rate_hz", mc.sample_rate_hz},
            {"joint_names", mc.joint_names},
            {"samples", std::move(samples)}};
  return std::string(kMotionHeader) + canonical(j);
}

MotionCapture parse_motion(std::string_view bytes) {
  if (!bytes.starts_with(kMotionHeader)) invalid("missing '#careledger-motion v1' header");
  MotionCapture mc;
  try {
    const Json j = jf::parse(bytes.substr(kMotionHeader.size()));
    mc.device_id = jf::str(j, "device_id");
    mc.patient_id = jf::str(j, "patient_id");
    mc.sample_rate_hz = jf::num(j, "sample_rate_hz");
    const Json& names = jf::at(j, "joint_names");
    if (!names.is_array()) invalid("joint_names is not an array");
    for (const auto& n : names) {
      if (!n.is_string()) invalid("joint name is not a string");
      mc.joint_names.push_back(n.get<std::string>());
    }
    const Json& rows = jf::at(j, "samples");
    if (!rows.is_array()) invalid("samples is not an array");
    for (const auto& row : rows) {
      if (!row.is_array() || row.empty()) invalid("sample is not a non-empty array");
      MotionSample s;
      for (std::size_t k = 0; k < row.size(); ++k) {
        if (!row[k].is_number()) invalid("sample value is not a number");
        const double v = row[k].get<double>();
        if (k == 0) {
          s.t_s = v;
        } else {
          s.angles_deg.push_back(v);
        }
      }
      mc.samples.push_back(std::move(s));
    }
  } catch (const FormatError& e) {
    invalid(e.what());
  }
  validate(mc);
  return mc;
}

FeatureVector extract_features(const MotionCapture& mc) {
  validate(mc);
  const std::size_t n = mc.samples.size();
  FeatureVector f;
  f.values.reserve(3 * mc.joint_names.size());
  for (std::size_t j = 0; j < mc.joint_names.size(); ++j) {
    double sum = 0;
    for (const auto& s : mc.samples) sum += s.angles_deg[j];
    const double mean = sum / static_cast<double>(n);

    double sq = 0;
    double delta = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = mc.samples[i].angles_deg[j] - mean;
      sq += d * d;
      if (i > 0) delta += std::fabs(mc.samples[i].angles_deg[j] - mc.samples[i - 1].angles_deg[j]);
    }
    f.values.push_back(mean);
    f.values.push_back(std::sqrt(sq / static_cast<double>(n)));
    f.values.push_back(delta / static_cast<double>(n - 1));
  }
  return f;
}

double similarity(const FeatureVector& a, const FeatureVector& b) {
  if (a.values.size() != b.values.size()) {
    throw LengthMismatch("feature vectors of length " + std::to_string(a.values.size()) +
                         " and " + std::to_string(b.values.size()));
  }
  if (a.values.empty()) return 0;
  double acc = 0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    const double x = a.values[i];
    const double y = b.values[i];
    const double r = (x - y) / (std::fabs(x) + std::fabs(y) + kEpsilon);
    acc += r * r;
  }
  return std::sqrt(acc / static_cast<double>(a.values.size()));
}

Json to_json(const FeatureVector& f) { return Json(f.values); }

FeatureVector feature_vector_from_json(const Json& j) {
  if (!j.is_array()) throw FormatError("feature vector is not an array");
  FeatureVector f;
  for (const auto& v : j) {
    if (!v.is_number()) throw FormatError("feature value is not a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw FormatError("feature value is not finite");
    f.values.push_back(d);
  }
  if (f.values.size() % 3 != 0) throw FormatError("feature vector length is not a multiple of 3");
  return f;
}

}  // namespace careledger::careflow
