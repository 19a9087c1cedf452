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

#include "careledger/careflow/decision.hpp"

namespace careledger::careflow {

DoseSuggestion suggest_dose(const std::vector<HistoryEntry>& history, const FeatureVector& current,
                            const DecisionPolicy& policy) {
  DoseSuggestion s;
  for (auto it = history.rbegin(); it != history.rend(); ++it) {
    if (!it->approved) continue;
    const double sim = similarity(current, it->features);
    s.similarity = sim;
    s.dose_mg = it->dose_mg;
    s.basis = it->episode;
    s.auto_approve = sim <= policy.tau;
    break;
  }
  return s;
}

}  // namespace careledger::careflow
