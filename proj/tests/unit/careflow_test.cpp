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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "careledger/careflow/decision.hpp"
#include "careledger/careflow/documents.hpp"
#include "careledger/careflow/errors.hpp"
#include "careledger/careflow/motion.hpp"
#include "careledger/cli/simulator.hpp"

namespace {

using namespace careledger;
using namespace careledger::careflow;

MotionCapture series(std::vector<std::vector<double>> rows, std::vector<std::string> joints) {
  MotionCapture mc{"dev", "pat", std::move(joints), {}, 50};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    mc.samples.push_back(MotionSample{0.02 * static_cast<double>(i), std::move(rows[i])});
  }
  return mc;
}

// Written out from the formula independently of the library, in long double.
double similarity_oracle(const std::vector<double>& a, const std::vector<double>& b) {
  long double acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const long double x = a[i], y = b[i];
    const long double r = (x - y) / (std::fabs(x) + std::fabs(y) + 1e-9L);
    acc += r * r;
  }
  return static_cast<double>(std::sqrt(acc / static_cast<long double>(a.size())));
}

TEST(Motion, ValidationRejectsMalformedCaptures) {
  auto ok = series({{1}, {2}}, {"wrist"});
  EXPECT_NO_THROW(validate(ok));

  EXPECT_THROW(validate(series({{1}}, {"wrist"})), ValidationError);

  auto backwards = ok;
  backwards.samples[1].t_s = 0;
  EXPECT_THROW(validate(backwards), ValidationError);

  auto short_row = series({{1, 2}, {3}}, {"wrist", "elbow"});
  EXPECT_THROW(validate(short_row), ValidationError);

  auto nan = ok;
  nan.samples[0].angles_deg[0] = std::nan("");
  EXPECT_THROW(validate(nan), ValidationError);

  auto dup = series({{1, 1}, {2, 2}}, {"wrist", "wrist"});
  EXPECT_THROW(validate(dup), ValidationError);
}

TEST(Motion, CanonicalFormatRoundTrips) {
  auto mc = series({{1.5, -2.25}, {0.1, 3}, {7, 8}}, {"wrist", "elbow"});
  const std::string wire = serialize_motion(mc);
  EXPECT_TRUE(wire.starts_with("#careledger-motion v1\n{"));
  EXPECT_EQ(wire.find('\n', 22), std::string::npos);
  EXPECT_EQ(parse_motion(wire), mc);
  EXPECT_EQ(serialize_motion(parse_motion(wire)), wire);
}

TEST(Motion, ParseRejectsBadInput) {
  const std::string wire = serialize_motion(series({{1}, {2}}, {"wrist"}));
  EXPECT_THROW(parse_motion(wire.substr(1)), ValidationError);
  EXPECT_THROW(parse_motion(std::string(kMotionHeader) + "{"), ValidationError);
  EXPECT_THROW(parse_motion(std::string(kMotionHeader) +
                            R"({"device_id":"d","joint_names":["w"],"patient_id":"p",)"
                            R"("sample_rate_hz":50,"samples":[[0,1]]})"),
               ValidationError);
}

TEST(Features, ConstantSeries) {
  const auto f = extract_features(series({{5}, {5}, {5}, {5}}, {"wrist"}));
  ASSERT_EQ(f.values.size(), 3u);
  EXPECT_DOUBLE_EQ(f.mean_deg(0), 5);
  EXPECT_DOUBLE_EQ(f.std_deg(0), 0);
  EXPECT_DOUBLE_EQ(f.mean_abs_delta_deg(0), 0);
}

TEST(Features, AlternatingSeriesMatchesHandOracle) {
  const auto f = extract_features(series({{0}, {10}, {0}, {10}}, {"wrist"}));
  EXPECT_DOUBLE_EQ(f.mean_deg(0), 5);
  EXPECT_DOUBLE_EQ(f.std_deg(0), 5);
  EXPECT_DOUBLE_EQ(f.mean_abs_delta_deg(0), 10);
}

TEST(Features, TwoJointsKeepJointOrder) {
  const auto f = extract_features(series({{0, 5}, {10, 5}, {0, 5}, {10, 5}}, {"wrist", "elbow"}));
  ASSERT_EQ(f.values.size(), 6u);
  EXPECT_EQ(f.joints(), 2u);
  EXPECT_DOUBLE_EQ(f.mean_deg(0), 5);
  EXPECT_DOUBLE_EQ(f.mean_abs_delta_deg(0), 10);
  EXPECT_DOUBLE_EQ(f.mean_deg(1), 5);
  EXPECT_DOUBLE_EQ(f.std_deg(1), 0);
}

TEST(Similarity, FrozenValue) {
  // sqrt((2/22)^2 / 3), evaluated outside the library.
  EXPECT_NEAR(similarity({{10, 2, 1}}, {{12, 2, 1}}), 0.05248638810576205, 1e-15);
}

TEST(Similarity, IdentityIsZeroAndLengthsMustMatch) {
  EXPECT_EQ(similarity({{1, 2, 3}}, {{1, 2, 3}}), 0);
  EXPECT_EQ(similarity({{0, 0, 0}}, {{0, 0, 0}}), 0);
  EXPECT_THROW(similarity({{1, 2, 3}}, {{1, 2, 3, 4, 5, 6}}), LengthMismatch);
}

TEST(Similarity, SymmetricBoundedAndMatchesOracle) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> v(-50, 50);
  for (int trial = 0; trial < 500; ++trial) {
    FeatureVector a, b;
    const std::size_t n = 3 * (1 + trial % 4);
    for (std::size_t i = 0; i < n; ++i) {
      a.values.push_back(v(rng));
      b.values.push_back(v(rng));
    }
    const double s = similarity(a, b);
    EXPECT_EQ(s, similarity(b, a));
    EXPECT_GE(s, 0);
    EXPECT_LE(s, 1);
    EXPECT_NEAR(s, similarity_oracle(a.values, b.values), 1e-12);
  }
}

HistoryEntry entry(std::vector<double> f, double dose, bool approved, std::uint8_t tag) {
  HistoryEntry e{{std::move(f)}, dose, approved, {}, tag};
  e.episode.bytes[0] = tag;
  return e;
}

TEST(SuggestDose, EmptyHistoryNeverAutoApproves) {
  const DoseSuggestion s = suggest_dose({}, {{1, 2, 3}});
  EXPECT_FALSE(s.auto_approve);
  EXPECT_FALSE(s.dose_mg);
  EXPECT_FALSE(s.similarity);
}

TEST(SuggestDose, IdenticalStateRepeatsLastDose) {
  const DoseSuggestion s = suggest_dose({entry({4, 1, 2}, 100, true, 1)}, {{4, 1, 2}});
  EXPECT_TRUE(s.auto_approve);
  EXPECT_EQ(s.dose_mg, 100);
  EXPECT_EQ(s.similarity, 0);
  ASSERT_TRUE(s.basis);
  EXPECT_EQ(s.basis->bytes[0], 1);
}

TEST(SuggestDose, JustAboveTauGoesToPhysicianWithDraft) {
  // One feature: similarity(1, b) = (b - 1) / (b + 1 + eps). Aim a hair above tau.
  const double target = 0.1 + 1e-6;
  const double b = (1 + target) / (1 - target);
  ASSERT_GT(similarity_oracle({1}, {b}), 0.1);
  const DoseSuggestion s = suggest_dose({entry({b}, 80, true, 2)}, {{1}});
  EXPECT_FALSE(s.auto_approve);
  EXPECT_EQ(s.dose_mg, 80);
  EXPECT_GT(*s.similarity, 0.1);

  const double below = (1 + 0.099) / (1 - 0.099);
  ASSERT_LT(similarity_oracle({1}, {below}), 0.1);
  EXPECT_TRUE(suggest_dose({entry({below}, 80, true, 2)}, {{1}}).auto_approve);
}

TEST(SuggestDose, ComparesWithMostRecentApprovedEntryOnly) {
  const std::vector<HistoryEntry> h = {entry({1, 1, 1}, 50, true, 1),
                                       entry({9, 9, 9}, 70, true, 2),
                                       entry({1, 1, 1}, 999, false, 3)};
  const DoseSuggestion s = suggest_dose(h, {{1, 1, 1}});
  EXPECT_FALSE(s.auto_approve);
  EXPECT_EQ(s.dose_mg, 70);
  EXPECT_EQ(s.basis->bytes[0], 2);
}

TEST(SuggestDose, TauIsConfigurable) {
  const auto h = std::vector<HistoryEntry>{entry({10, 2, 1}, 100, true, 1)};
  EXPECT_FALSE(suggest_dose(h, {{12, 2, 1}}, DecisionPolicy{0.05, 0}).auto_approve);
  EXPECT_TRUE(suggest_dose(h, {{12, 2, 1}}, DecisionPolicy{0.06, 0}).auto_approve);
}

// Moving the current state further from the last episode can only take auto
// from true to false.
TEST(SuggestDose, MonotoneInDistance) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> v(1, 20);
  std::uniform_real_distribution<double> step(0.0, 0.05);
  for (int trial = 0; trial < 200; ++trial) {
    FeatureVector last;
    for (int i = 0; i < 6; ++i) last.values.push_back(v(rng));
    const std::vector<HistoryEntry> h = {HistoryEntry{last, 100, true, {}, 0}};
    FeatureVector cur = last;
    double prev_sim = 0;
    bool was_auto = true;
    for (int k = 0; k < 30; ++k) {
      for (auto& x : cur.values) x *= 1 + step(rng);
      const DoseSuggestion s = suggest_dose(h, cur);
      ASSERT_GE(*s.similarity, prev_sim);
      if (!was_auto) {
        ASSERT_FALSE(s.auto_approve);
      }
      EXPECT_EQ(s.auto_approve, *s.similarity <= 0.1);
      prev_sim = *s.similarity;
      was_auto = s.auto_approve;
    }
  }
}

TEST(Simulator, PureSinusoidMeanAbsDeltaMatchesClosedForm) {
  cli::DeviceSimulation sim{"dev", "pat", {"wrist"}, 50, 10, 5, 3, 0, 1};
  const auto f3 = extract_features(cli::simulate_device(sim));
  sim.amplitude_deg = 6;
  const auto f6 = extract_features(cli::simulate_device(sim));
  // Mean of |3 sin(2 pi 5 (i+1)/50) - 3 sin(2 pi 5 i/50)| over 499 steps,
  // summed outside the library.
  EXPECT_NEAR(f3.mean_abs_delta_deg(0), 1.140021150341113, 1e-12);
  EXPECT_NEAR(f6.mean_abs_delta_deg(0), 2.280042300682226, 1e-12);
  EXPECT_NEAR(f6.mean_abs_delta_deg(0) / f3.mean_abs_delta_deg(0), 2.0, 1e-12);
}

TEST(Simulator, ShapeAndDeterminism) {
  cli::DeviceSimulation sim{"dev", "pat", {"wrist", "elbow"}, 50, 10, 5, 3, 0.05, 9};
  const auto a = cli::simulate_device(sim);
  EXPECT_EQ(a.samples.size(), 500u);
  EXPECT_EQ(a.samples[1].angles_deg.size(), 2u);
  EXPECT_EQ(a, cli::simulate_device(sim));
  sim.seed = 10;
  EXPECT_NE(a, cli::simulate_device(sim));
  sim.seconds = 0.01;
  EXPECT_THROW(cli::simulate_device(sim), ValidationError);
}

TEST(Documents, RoundTrip) {
  RequestDocument d{"pat", DoseRequestKind::routine, 1700, Digest{}, FeatureVector{{1, 2, 3}},
                    DoseSuggestion{100.0, 0.0, true, Digest{}}, "after lunch"};
  d.motion_file->bytes[3] = 9;
  EXPECT_EQ(parse_request_document(serialize(d)), d);

  RequestDocument bare{"pat", DoseRequestKind::emergency, 5, std::nullopt, std::nullopt, {}, ""};
  EXPECT_EQ(parse_request_document(serialize(bare)), bare);

  PrescriptionDocument rx{"pat", Digest{}, 12.5, Decision::overridden, "doc", 9};
  EXPECT_EQ(parse_prescription_document(serialize(rx)), rx);
  EXPECT_THROW(parse_prescription_document(serialize(d)), ValidationError);
  EXPECT_THROW(parse_request_document("nope"), ValidationError);
}

}  // namespace
