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

#ifndef POSGCI_APPROX_MODEL_H_
#define POSGCI_APPROX_MODEL_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "posgci/common_game.h"
#include "posgci/stage.h"

namespace posgci {

inline constexpr std::int64_t kDefaultCellBudget = 200'000'000;

enum class BeliefSource {
  kExact,           // exact filter on the full key
  kUniformPrior,    // finite-memory filter started from Unif(S)
  kOccupancyPrior,  // finite-memory filter started from a supplied d_{S,t}
};

// Model built from a belief table: P(s, p | key) comes from the closed-form
// common beliefs and the predictive is its push-forward through T and O, so
// the z- and o-laws are consistent by construction.
class ApproxCommonModel : public CommonGame {
 public:
  // priors[t-1] is the prior placed at step t (occupancy source only).
  ApproxCommonModel(PosgModel model, SharingPattern pattern,
                    CompressionScheme scheme, BeliefSource source,
                    std::vector<Vec> priors = {},
                    std::optional<std::vector<Mat>> rewards = std::nullopt,
                    std::int64_t budget = kDefaultCellBudget);

  // The exact common-information game (keys are full c_h).
  static ApproxCommonModel Exact(PosgModel model, SharingPattern pattern,
                                 std::int64_t budget = kDefaultCellBudget);

  BeliefSource source() const { return source_; }
  // S x P_joint.
  Mat belief(int h, const InfoKey& key) const;
  Mat compute_predictive(int h, const InfoKey& key) const override;

 private:
  BeliefSource source_;
  std::vector<Vec> priors_;
};

ApproxCommonModel build_consistent_model(
    const PosgModel& model, const SharingPattern& pattern,
    const CompressionScheme& scheme, BeliefSource source,
    std::vector<Vec> priors = {},
    std::optional<std::vector<Mat>> rewards = std::nullopt);

// d_{S,t} under `policy` for t = 1..H (index t-1).
std::vector<Vec> occupancy_priors(const PosgModel& model,
                                  const GeneralPolicy& policy);

StepDistribution model_step(const CommonGame& game, int h, const InfoKey& key,
                            const PrescriptionProfile& profile);

// phi-hat lookup; throws ReachabilityError if (key, z) leaves the game.
InfoKey evolve_common(const CommonGame& game, int h, const InfoKey& key,
                      const InfoKey& increment);

enum class ErrorMode { kExact, kMonteCarlo };

struct ErrorOptions {
  ErrorMode mode = ErrorMode::kExact;
  int samples = 10000;             // Monte Carlo trajectories per policy
  int random_prescriptions = 20;   // added to the deterministic vertices
  std::int64_t max_vertices = 1'000'000;
  std::uint64_t seed = 0;
  std::int64_t node_budget = 50'000'000;
};

struct ModelErrors {
  double eps_r = 0.0;
  double eps_z = 0.0;
  std::vector<double> eps_r_by_step;  // h = 1..H
  std::vector<double> eps_z_by_step;
  std::string policy_set;  // "all general policies" or "supplied (k)"
  std::string mode;        // "exact" or "monte_carlo(N)"
  bool vertices_complete = true;
};

// With an empty policy list the supremum over general joint policies is
// taken exactly by dynamic programming over the history tree (exact mode
// only). Per common information the supremum over prescriptions is taken
// over deterministic vertices plus random stochastic prescriptions.
ModelErrors measure_model_errors(const PosgModel& model, const CommonGame& m,
                                 const std::vector<GeneralPolicy>& policies,
                                 const ErrorOptions& options = {});

}  // namespace posgci

#endif  // POSGCI_APPROX_MODEL_H_
