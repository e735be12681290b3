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

#ifndef POSGCI_MODEL_H_
#define POSGCI_MODEL_H_

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "posgci/common.h"

namespace posgci {

// Records how rewards were squashed into [0,1]:
// normalized = (raw - offset) / scale.
struct RewardAffine {
  double offset = 0.0;
  double scale = 1.0;
  double to_raw(double normalized) const { return normalized * scale + offset; }
  double to_normalized(double raw) const { return (raw - offset) / scale; }
};

// Finite-horizon tabular POSG. Steps are 1-based throughout the public API.
//
// The game starts from a_1: s_1 ~ mu_1, then for h = 1..H the agents act,
// s_{h+1} ~ T_h(.|s_h, a_h), o_{h+1} ~ O_{h+1}(.|s_{h+1}) and agent i
// collects r_{i,h+1}(o_{h+1}). O_1 is stored but never rewarded.
struct PosgModel {
  std::string name;
  int horizon = 0;
  int num_agents = 0;
  int num_states = 0;
  std::vector<int> action_counts;
  std::vector<int> obs_counts;
  // transitions[h-1][a](s, s') = T_h(s' | s, a).
  std::vector<std::vector<Mat>> transitions;
  // emissions[h-1](s, o) = O_h(o | s), h = 1..H+1.
  std::vector<Mat> emissions;
  // rewards[h-2](o, i) = r_{i,h}(o), h = 2..H+1.
  std::vector<Mat> rewards;
  Vec initial;
  std::optional<RewardAffine> reward_map;

  int num_joint_actions() const;
  int num_joint_obs() const;

  const Mat& T(int h, int a) const { return transitions[h - 1][a]; }
  const Mat& O(int h) const { return emissions[h - 1]; }
  double r(int i, int h, int o) const { return rewards[h - 2](o, i); }

  std::vector<int> split_action(int a) const;
  std::vector<int> split_obs(int o) const;
  int join_action(const std::vector<int>& a) const;
  int join_obs(const std::vector<int>& o) const;
};

struct Violation {
  std::string location;
  std::string message;
};

using ValidationReport = std::vector<Violation>;

ValidationReport validate_model(const PosgModel& model);
// Throws ModelError listing the first few violations.
void require_valid(const PosgModel& model);

// actions[t-1] = a_t and observations[t-2] = o_t; a history at step h holds
// h-1 of each.
struct History {
  std::vector<int> actions;
  std::vector<int> observations;
  int step() const { return static_cast<int>(actions.size()) + 1; }
  int a(int t) const { return actions[t - 1]; }
  int o(int t) const { return observations[t - 2]; }
  bool operator<(const History& other) const {
    return std::tie(actions, observations) <
           std::tie(other.actions, other.observations);
  }
  bool operator==(const History& other) const = default;
};

struct Trajectory {
  std::uint64_t seed = 0;
  std::vector<int> states;        // s_1..s_{H+1}
  std::vector<int> actions;       // a_1..a_H
  std::vector<int> observations;  // o_2..o_{H+1}
  // rewards[h-2][i] = r_{i,h}(o_h), h = 2..H+1.
  std::vector<std::vector<double>> rewards;

  History prefix(int h) const;  // history at step h
  double return_of(int i) const;
};

// A joint policy that may condition on the full joint history.
class GeneralPolicy {
 public:
  using Fn = std::function<Vec(int h, const History& history)>;

  GeneralPolicy() = default;
  explicit GeneralPolicy(Fn fn) : fn_(std::move(fn)) {}

  Vec operator()(int h, const History& history) const {
    return fn_(h, history);
  }
  bool valid() const { return static_cast<bool>(fn_); }

  static GeneralPolicy Uniform(int num_joint_actions);
  static GeneralPolicy FixedAction(int num_joint_actions, int joint_action);
  // Missing histories fall back to uniform.
  static GeneralPolicy Table(int num_joint_actions,
                             std::map<History, Vec> table);
  static GeneralPolicy Callback(Fn fn) { return GeneralPolicy(std::move(fn)); }

 private:
  Fn fn_;
};

// Seedable, splittable generator. Streams derived from (seed, index) are
// independent of the order in which they are drawn.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  static Rng Derive(std::uint64_t seed, std::uint64_t stream);
  static std::uint64_t Mix(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next() { return engine_(); }
  double uniform();  // [0,1)
  int categorical(const Vec& probs);
  // Dirichlet(1,...,1) sample.
  Vec simplex(int n);

 private:
  std::mt19937_64 engine_;
};

Trajectory sample_trajectory(const PosgModel& model,
                             const GeneralPolicy& policy, std::uint64_t seed);

// Trajectory k is seeded with Rng::Mix(seed, k + 1); results do not depend
// on the thread count.
std::vector<Trajectory> sample_batch(const PosgModel& model,
                                     const GeneralPolicy& policy,
                                     std::uint64_t seed, int count,
                                     int threads = 1);

}  // namespace posgci

#endif  // POSGCI_MODEL_H_
