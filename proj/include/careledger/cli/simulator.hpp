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

// Synthetic wearable feed: per joint a sinusoidal tremor plus Gaussian noise,
//   angle_j(t) = amplitude * sin(2*pi*tremor_hz*t + j*pi/4) + N(0, noise_deg)
// sampled at t = i / rate_hz.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "careledger/careflow/motion.hpp"

namespace careledger::cli {

struct DeviceSimulation {
  std::string device_id;
  std::string patient_id;
  std::vector<std::string> joints{"wrist", "elbow"};
  double rate_hz = 50;
  double seconds = 10;
  double tremor_hz = 5;
  double amplitude_deg = 3;
  double noise_deg = 0.05;
  std::uint64_t seed = 1;
};

// ValidationError if the parameters do not give at least 2 samples.
careflow::MotionCapture simulate_device(const DeviceSimulation& sim);

}  // namespace careledger::cli
