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

#ifndef POSGCI_LEARNING_H_
#define POSGCI_LEARNING_H_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "posgci/common_game.h"
#include "posgci/planning.h"

namespace posgci {

struct LearnConfig {
  std::int64_t n0 = 10000;  // trajectories per step
  std::int64_t n2 = 10000;  // rollouts per evaluated policy in selection
  double zeta1 = 0.1, zeta2 = 0.01;
  double theta1 = 0.1, theta2 = 0.1;
  double delta1 = 0.1;
  double eps_e = 0.01;
  double phi = 0.01;
  double constant_c = 1.0;
  int groups = 1;  // K
  std::uint64_t seed = 0;
  int threads = 1;

  void validate() const;  // throws ConfigError
};

// ceil(max{ C (P + ln(4 H Chat / delta1)) / (zeta1 theta1^2),
//           C A (O + ln(4 H Chat P A / delta1)) / (zeta2 theta2^2) }).
std::int64_t n0_bound(const LearnConfig& config, std::int64_t max_private,
                      std::int64_t max_keys, std::int64_t actions,
                      std::int64_t observations, int horizon);

// pi^h for h = 1..H. uniform_from[h-1] is the first step from which pi^h
// plays uniformly; it must not exceed max(1, h - Lhat).
struct ExplorationPolicySet {
  std::vector<GeneralPolicy> policies;
  std::vector<int> uniform_from;
  int hat_memory = 0;
};

ExplorationPolicySet make_uniform_exploration(const PosgModel& model,
                                              int hat_memory);
bool has_uniform_suffix(const ExplorationPolicySet& set);

// Sample access to the environment: (policy, seed, count) -> trajectories.
// Trajectory k of a call must be a pure function of (seed, k).
using Sampler = std::function<std::vector<Trajectory>(
    const GeneralPolicy& policy, std::uint64_t seed, std::int64_t count)>;

Sampler model_sampler(const PosgModel& model, int threads = 1);

// Empirical model: predictive(p * A + a, o) = Phat(p | key) Phat(o | key,
// p, a) from visit counts. Cells never visited get a uniform fallback and
// are reported through the masks.
class EmpiricalModel : public CommonGame {
 public:
  struct Counts {
    Vec phi;  // per joint p
    Mat psi;  // (p * A + a) x o
  };

  // `shape` supplies sizes and the information layout only; its dynamics
  // are never read.
  EmpiricalModel(const PosgModel& shape, SharingPattern pattern,
                 CompressionScheme scheme,
                 std::vector<std::map<InfoKey, Counts>> counts,
                 std::vector<Mat> reward_estimate,
                 std::int64_t budget = 200'000'000);

  Mat compute_predictive(int h, const InfoKey& key) const override;

  // Visit count of the key (0 if never seen).
  double key_visits(int h, const InfoKey& key) const;
  double cell_visits(int h, const InfoKey& key, int p, int a) const;
  const std::vector<std::map<InfoKey, Counts>>& counts() const {
    return counts_;
  }
  // Enumerated keys, and (key, p, a) cells with positive estimated mass,
  // that were never visited (uniform fallback used).
  int unvisited_keys() const { return unvisited_keys_; }
  std::int64_t unvisited_cells() const { return unvisited_cells_; }

 private:
  std::vector<std::map<InfoKey, Counts>> counts_;
  int unvisited_keys_ = 0;
  std::int64_t unvisited_cells_ = 0;
};

// Draws config.n0 trajectories under pi^h for every h and counts (key, p)
// and (key, p, a, o'). If `reward` is empty the estimate is the empirical
// mean of observed rewards per (h, o); unseen observations get 0.
EmpiricalModel construct_empirical(const Sampler& sampler,
                                   const PosgModel& shape,
                                   const ExplorationPolicySet& exploration,
                                   const SharingPattern& pattern,
                                   const CompressionScheme& scheme,
                                   const std::optional<std::vector<Mat>>& reward,
                                   const LearnConfig& config);

struct SelectionResult {
  int index = 0;
  // score[j] = max_{i,m} (R_i^{j,m} - R_i^j)
  std::vector<double> score;
  std::vector<Vec> returns;          // R^j per agent
  std::vector<double> standard_error;  // of score[j]'s maximizing term
};

SelectionResult policy_selection(
    const std::vector<const CommonGame*>& models,
    const std::vector<CommonInfoPolicy>& candidates, SolverKind kind,
    const LearnConfig& config, const Sampler& sampler,
    const PosgModel& shape);

struct ExplorationGroup {
  ExplorationPolicySet policies;
  std::optional<std::vector<Mat>> reward;  // empty: empirical estimate
};

using ExplorationGenerator = std::function<std::vector<ExplorationGroup>(
    const PosgModel& shape, int hat_memory, const LearnConfig& config)>;

// K groups of uniform exploration with empirical rewards.
ExplorationGenerator uniform_exploration_generator();

struct LaciResult {
  CommonInfoPolicy policy;
  int selected = 0;
  std::vector<EquilibriumSolution> candidates;
  std::vector<double> selection_score;
  // Coverage of each group's empirical model.
  std::vector<int> unvisited_keys;
  std::vector<std::int64_t> unvisited_cells;
  std::vector<int> model_keys;
};

LaciResult laci(const Sampler& sampler, const PosgModel& shape,
                const SharingPattern& pattern, const CompressionScheme& scheme,
                SolverKind kind, const LearnConfig& config,
                const ExplorationGenerator& generator =
                    uniform_exploration_generator());

// Mass of states whose occupancy d_{S,h} under `policy` is below phi.
double underexplored_mass(const PosgModel& model, const GeneralPolicy& policy,
                          int h, double phi);

}  // namespace posgci

#endif  // POSGCI_LEARNING_H_
