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

#ifndef POSGCI_PLANNING_H_
#define POSGCI_PLANNING_H_

#include <map>
#include <string>
#include <vector>

#include "posgci/approx_model.h"
#include "posgci/common_game.h"
#include "posgci/model_io.h"
#include "posgci/stage.h"

namespace posgci {

// Per step, a mixture of prescription profiles for each common-information
// key. Keys are compressed with `memory` (exact_memory(...) for full c_h).
// At execution the realized history is split and compressed with this
// policy's own memory; keys that were never planned for play uniformly.
struct CommonInfoPolicy {
  SharingPattern pattern;
  int memory = 0;
  int horizon = 0;
  std::vector<int> action_counts;
  std::vector<std::map<InfoKey, MixedProfile>> table;  // index h-1

  bool keyed_on_exact() const {
    return memory >= exact_memory(pattern, horizon);
  }
  // nullptr when the key is absent.
  const MixedProfile* find(int h, const InfoKey& key) const;
  // Joint-action distribution at (h, key, per-agent private indices).
  Vec action_distribution(int h, const InfoKey& key,
                          const std::vector<int>& priv,
                          const PrivateSpace& space) const;
  Vec act(const PosgModel& model, const History& history) const;
};

GeneralPolicy as_general(const CommonInfoPolicy& policy,
                         const PosgModel& model);

Json policy_to_json(const CommonInfoPolicy& policy);
CommonInfoPolicy policy_from_json(const Json& doc);

struct EquilibriumSolution {
  CommonInfoPolicy policy;
  // values[h-1][k](i) = V_{i,h}(key k) on the planning game's keys.
  std::vector<std::vector<Vec>> values;
  std::vector<std::vector<double>> gaps;  // certified stage gaps
  std::vector<std::vector<int>> iterations;
  std::vector<double> wall_ms;  // per step
  SolverKind kind = SolverKind::kCCE;
  std::vector<std::string> warnings;

  Vec root_values() const { return values.front().front(); }
  double max_gap() const;
};

// Backward induction on any common-information game.
EquilibriumSolution solve_backward(const CommonGame& game, SolverKind kind,
                                   const SolverOptions& options);

// Exact common information with exact beliefs.
EquilibriumSolution vi_common_info(const PosgModel& model,
                                   const SharingPattern& pattern,
                                   SolverKind kind,
                                   const SolverOptions& options);

EquilibriumSolution vi_approx(const CommonGame& model, SolverKind kind,
                              const SolverOptions& options);

// Stage game at (h, key k) with continuation values for step h+1 (ignored
// at h = H).
StageGame stage_game(const CommonGame& game, int h, int k,
                     const std::vector<Vec>& next_values);

// Values of `policy` on every key of `game` (policy keys are obtained by
// compressing the game's keys, so policy.memory <= game.memory()).
std::vector<std::vector<Vec>> evaluate_policy(const CommonGame& game,
                                              const CommonInfoPolicy& policy);

struct BestResponse {
  // Agent i's block replaced in every mixture component; keyed on the
  // game's keys and memory.
  CommonInfoPolicy policy;
  std::vector<std::vector<double>> values;  // agent i, per key
  double root_value = 0.0;
};

// Backward pass where agent i best-responds at each key: with a fixed
// prescription against the opponents' mixture (NE / CCE kinds) or with the
// best strategy modification (CE).
BestResponse best_response_policy(const CommonGame& game,
                                  const CommonInfoPolicy& policy, int i,
                                  SolverKind kind);

// V_{i,1}(empty) by exact summation over joint histories.
double policy_value_exact(const PosgModel& model, const GeneralPolicy& policy,
                          int i);
Vec policy_values_exact(const PosgModel& model, const GeneralPolicy& policy);

struct GapReport {
  double gap = 0.0;
  Vec values;          // per agent, under the policy
  Vec deviation;       // per agent, best deviation value
  std::vector<double> per_agent;
};

// NE- / CCE- / CE-gap of `policy` in the true game. Deviations are computed
// on the exact common-information game; both sides of the gap are then
// evaluated by exact history enumeration.
GapReport policy_gap(const PosgModel& model, const CommonInfoPolicy& policy,
                     SolverKind kind);
GapReport policy_gap(const ApproxCommonModel& exact_game,
                     const CommonInfoPolicy& policy, SolverKind kind);

// Which deviation class a solver kind is certified against.
SolverKind deviation_kind(SolverKind kind);

}  // namespace posgci

#endif  // POSGCI_PLANNING_H_
