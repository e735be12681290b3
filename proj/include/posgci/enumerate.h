// Copyright 2026 The posgci Authors.
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

#ifndef POSGCI_ENUMERATE_H_
#define POSGCI_ENUMERATE_H_

#include <cstdint>
#include <functional>

#include "posgci/model.h"

namespace posgci {

// Depth-first walk over every joint history with positive probability under
// `policy`, up to step max_step. The visitor receives the step h, the history
// and alpha(s) = P(s_h = s, history) including the policy's action
// probabilities. Returning false prunes the subtree.
using HistoryVisitor =
    std::function<bool(int h, const History& history, const Vec& alpha)>;

void for_each_history(const PosgModel& model, const GeneralPolicy& policy,
                      int max_step, const HistoryVisitor& visit,
                      std::int64_t node_budget = 50'000'000);

// d_{S,h}: state distribution at step h under `policy`.
Vec state_occupancy(const PosgModel& model, const GeneralPolicy& policy,
                    int h);

}  // namespace posgci

#endif  // POSGCI_ENUMERATE_H_
