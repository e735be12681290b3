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

#ifndef POSGCI_STAGE_H_
#define POSGCI_STAGE_H_

#include <functional>
#include <string>
#include <vector>

#include "posgci/common.h"
#include "posgci/model.h"

namespace posgci {

// gamma_i: P_i x A_i, one action distribution per private information.
using Prescription = Mat;
using PrescriptionProfile = std::vector<Prescription>;

// Uniform mixture over profiles; this is the correlation device. Product
// solutions are mixtures of size one.
struct MixedProfile {
  std::vector<PrescriptionProfile> components;
  int size() const { return static_cast<int>(components.size()); }
};

// swap[p_i][b] = action played when b is recommended at private info p_i.
using SwapModification = std::vector<std::vector<int>>;

enum class SolverKind { kNEZeroSum, kNECooperative, kCCE, kCE };

std::string solver_kind_name(SolverKind kind);
SolverKind solver_kind_from_name(const std::string& name);

// One stage of the backward pass in reduced multilinear form:
//   Q_i(gamma) = sum_{p, a} payoff[i](p, a) prod_j gamma_j(a_j | p_j),
// where payoff already carries P(p | c) and the expected reward plus
// continuation value.
class StageGame {
 public:
  StageGame(std::vector<int> private_counts, std::vector<int> action_counts,
            std::vector<Mat> payoff, double scale = 1.0);

  // joint(p * A + a, o) = P(p, o' | c, a). continuation(p, a, o) returns the
  // per-agent value of the next common information.
  static StageGame FromPredictive(
      std::vector<int> private_counts, std::vector<int> action_counts,
      const Mat& joint, const std::function<double(int i, int o)>& reward,
      const std::function<Vec(int p, int a, int o)>& continuation,
      double scale);

  // Builds the predictive from a belief mu over S x P_joint and the step-h
  // kernels of `model`.
  static StageGame FromBelief(
      const PosgModel& model, int h, const Mat& belief,
      std::vector<int> private_counts,
      const std::function<Vec(int p, int a, int o)>& continuation,
      double scale);

  int num_agents() const { return static_cast<int>(private_counts_.size()); }
  int private_count(int i) const { return private_counts_[i]; }
  int action_count(int i) const { return action_counts_[i]; }
  const std::vector<int>& private_counts() const { return private_counts_; }
  const std::vector<int>& action_counts() const { return action_counts_; }
  int joint_private() const { return joint_private_; }
  int joint_actions() const { return joint_actions_; }
  const Mat& payoff(int i) const { return payoff_[i]; }
  double scale() const { return scale_; }
  int p_digit(int p, int i) const { return p_digits_[p][i]; }
  int a_digit(int a, int i) const { return a_digits_[a][i]; }

 private:
  std::vector<int> private_counts_, action_counts_;
  int joint_private_, joint_actions_;
  std::vector<Mat> payoff_;
  double scale_;
  std::vector<std::vector<int>> p_digits_, a_digits_;
};

PrescriptionProfile uniform_profile(const StageGame& game);
PrescriptionProfile uniform_profile(const std::vector<int>& private_counts,
                                    const std::vector<int>& action_counts);
MixedProfile single(PrescriptionProfile profile);

// w(p, a) = avg_t prod_j gamma^t_j(a_j | p_j), a P_joint x A_joint table.
Mat profile_weights(const std::vector<int>& private_counts,
                    const std::vector<int>& action_counts,
                    const MixedProfile& mix);

double stage_q(const StageGame& game, const PrescriptionProfile& profile,
               int i);
// Average of stage_q over the mixture's components.
double stage_q(const StageGame& game, const MixedProfile& mix, int i);

// c(p_i, a_i) with stage_q = sum gamma_i(a_i|p_i) c(p_i, a_i); agent i's own
// block of `profile` is ignored.
Mat stage_q_gradient(const StageGame& game, const PrescriptionProfile& profile,
                     int i);
Mat stage_q_gradient(const StageGame& game, const MixedProfile& opponents,
                     int i);

// Deterministic per-row argmax of the averaged gradient; ties go to the
// smallest action index.
Prescription prescription_best_response(const StageGame& game,
                                        const MixedProfile& opponents, int i);

// Best strategy modification against the mixture and its value.
SwapModification best_swap(const StageGame& game, const MixedProfile& mix,
                           int i, double* value = nullptr);
Prescription apply_swap(const SwapModification& swap, const Prescription& g);

double stage_gap(const StageGame& game, const MixedProfile& solution,
                 SolverKind kind);

struct SolverOptions {
  double eps_e = 0.01;
  int max_iters = 200000;
  double step_scale = 1.0;  // zero-sum: step_scale * sqrt(ln A_i / t);
                            // no-regret: per row, sqrt(ln A_i / sum sq. gains)
  int check_every = 10;
};

struct StageSolution {
  MixedProfile profile;
  double gap = 0.0;
  int iterations = 0;
  SolverKind kind = SolverKind::kCCE;  // kind actually solved
  std::string warning;
};

// Throws ConvergenceError when the certified gap stays above eps_e.
StageSolution solve_stage(const StageGame& game, SolverKind kind,
                          const SolverOptions& options);

// True when Q_0 + Q_1 does not depend on the profile (checked per joint
// private information).
bool is_zero_sum(const StageGame& game, double tol = 1e-7);

}  // namespace posgci

#endif  // POSGCI_STAGE_H_
