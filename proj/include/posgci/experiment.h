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

#ifndef POSGCI_EXPERIMENT_H_
#define POSGCI_EXPERIMENT_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "posgci/approx_model.h"
#include "posgci/bench.h"
#include "posgci/learning.h"
#include "posgci/sharing.h"
#include "posgci/stage.h"

namespace posgci {

enum class ExperimentMode { kPlan, kLearn, kEvaluate, kSweepL };

std::string mode_name(ExperimentMode mode);
ExperimentMode mode_from_name(const std::string& name);

struct InstanceSpec {
  // dectiger | random_observable | matching_pennies | file
  std::string kind;
  int horizon = 0;
  std::uint64_t seed = 0;
  int num_states = 2;
  std::vector<int> action_counts{2, 2};
  std::vector<int> obs_counts{2, 2};
  double eta = 0.1;
  bool zero_sum = false;
  ActionInfluence influence = ActionInfluence::kAll;
  std::string path;  // kind == file
};

struct ExperimentConfig {
  ExperimentMode mode = ExperimentMode::kPlan;
  InstanceSpec instance;
  SharingPattern pattern;
  std::optional<int> memory;  // absent: exact common information
  BeliefSource belief = BeliefSource::kUniformPrior;
  SolverKind kind = SolverKind::kCCE;
  SolverOptions solver;
  LearnConfig learn;
  std::string policy_path;  // evaluate mode
  bool exact_gap = true;    // plan: also compute the true gap
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  int threads = 1;
  bool record_timing = true;
};

// Strict parse: unknown keys are reported with their line; semantic checks
// (e.g. ne_zerosum on a non two-agent constant-sum instance) throw
// ConfigError.
ExperimentConfig parse_config(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text);

PosgModel build_instance(const InstanceSpec& spec);

// Checks that depend on the built instance.
void validate_config(const ExperimentConfig& config, const PosgModel& model);

inline constexpr int kExitOk = 0;
inline constexpr int kExitUserError = 1;
inline constexpr int kExitInternalError = 2;

// Runs the configured mode, writing tables and summary.json under
// config.out_dir. Errors are reported on `log` and mapped to exit codes.
int run_experiment(const ExperimentConfig& config, std::ostream& log);

}  // namespace posgci

#endif  // POSGCI_EXPERIMENT_H_
