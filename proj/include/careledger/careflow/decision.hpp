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

// Decision support: compare the current motion features with the most recent
// approved episode and, when they are close enough, suggest repeating that
// episode's dose without waiting for a physician.

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "careledger/careflow/motion.hpp"
#include "careledger/ledger/transaction.hpp"

namespace careledger::careflow {

struct HistoryEntry {
  FeatureVector features;
  double dose_mg = 0;
  bool approved = false;
  ContentHash episode;  // request document of that episode
  std::int64_t at_ms = 0;
};

struct DecisionPolicy {
  double tau = 0.1;
  // Auto approvals allowed in a row before a physician must decide;
  // 0 means no limit.
  std::uint32_t max_consecutive_auto = 0;
};

// `history` is sorted by time, oldest first; unapproved entries are skipped.
// The suggestion always carries the compared episode as basis.
DoseSuggestion suggest_dose(const std::vector<HistoryEntry>& history, const FeatureVector& current,
                            const DecisionPolicy& policy = {});

}  // namespace careledger::careflow
