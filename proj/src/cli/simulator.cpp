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

#include "careledger/cli/simulator.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "careledger/careflow/errors.hpp"

namespace careledger::cli {

careflow::MotionCapture simulate_device(const DeviceSimulation& sim) {
  if (!(sim.rate_hz > 0) || !(sim.seconds > 0) || sim.noise_deg < 0) {
    throw careflow::ValidationError("rate and duration must be positive, noise non-negative");
  }
  const auto n = static_cast<std::size_t>(std::llround(sim.rate_hz * sim.seconds));
  careflow::MotionCapture mc;
  mc.device_id = sim.device_id;
  mc.patient_id = sim.patient_id;
  mc.joint_names = sim.joints;
  mc.sample_rate_hz = sim.rate_hz;

  std::mt19937_64 rng(sim.seed);
  std::normal_distribution<double> noise(0.0, sim.noise_deg > 0 ? sim.noise_deg : 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    careflow::MotionSample s;
    s.t_s = static_cast<double>(i) / sim.rate_hz;
    for (std::size_t j = 0; j < sim.joints.size(); ++j) {
      const double phase = static_cast<double>(j) * std::numbers::pi / 4;
      double a = sim.amplitude_deg * std::sin(2 * std::numbers::pi * sim.tremor_hz * s.t_s + phase);
      if (sim.noise_deg > 0) a += noise(rng);
      s.angles_deg.push_back(a);
    }
    mc.samples.push_back(std::move(s));
  }
  careflow::validate(mc);
  return mc;
}

}  // namespace careledger::cli
