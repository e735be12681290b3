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

#ifndef POSGCI_COMMON_GAME_H_
#define POSGCI_COMMON_GAME_H_

#include <cstdint>
#include <map>
#include <vector>

#include "posgci/common.h"
#include "posgci/model.h"
#include "posgci/sharing.h"

namespace posgci {

// Memory length that keeps every item of c_h for h <= horizon.
int exact_memory(const SharingPattern& pattern, int horizon);

// A Markov game whose states are (possibly compressed) common information
// keys. Everything the planners need reduces to one table per key:
//   predictive(h, k)(p * A + a, o) = P(p_h = p, o_{h+1} = o | key, a_h = a).
// z_{h+1} is a function of (p, a, o) fixed by the sharing pattern, and the
// next key is evolve_compressed(key, z).
//
// Keys are enumerated by forward closure from the empty key over every
// (p, a, o) the predictive gives positive mass, so they are the keys
// reachable under some policy.
class CommonGame {
 public:
  virtual ~CommonGame() = default;

  const PosgModel& model() const { return model_; }
  const SharingPattern& pattern() const { return pattern_; }
  int memory() const { return memory_; }
  bool exact() const { return memory_ >= exact_memory(pattern_, horizon()); }
  int horizon() const { return model_.horizon; }
  int num_agents() const { return model_.num_agents; }
  int joint_actions() const { return model_.num_joint_actions(); }
  int joint_obs() const { return model_.num_joint_obs(); }

  int num_keys(int h) const { return static_cast<int>(keys_[h - 1].size()); }
  const InfoKey& key(int h, int k) const { return keys_[h - 1][k]; }
  int find_key(int h, const InfoKey& key) const;
  const PrivateSpace& private_space(int h) const { return spaces_[h - 1]; }

  const Mat& predictive(int h, int k) const { return predictive_[h - 1][k]; }
  // Same table for any key, enumerated or not.
  virtual Mat compute_predictive(int h, const InfoKey& key) const = 0;

  // r-hat_{i,h}(o) for h = 2..H+1.
  double reward(int i, int h, int o) const { return rewards_[h - 2](o, i); }
  const std::vector<Mat>& rewards() const { return rewards_; }

  // Distinct increments z_{h+1} and the index of the one produced by
  // (p, a, o).
  int num_increments(int h) const {
    return static_cast<int>(increments_[h - 1].size());
  }
  const InfoKey& increment(int h, int z) const { return increments_[h - 1][z]; }
  int increment_index(int h, int p, int a, int o) const {
    return z_index_[h - 1][(static_cast<size_t>(p) * joint_actions() + a) *
                               joint_obs() + o];
  }

  // Index of the step-(h+1) key, or -1 at h = H or on a zero-mass cell.
  int next_key(int h, int k, int p, int a, int o) const {
    if (h >= horizon()) return -1;
    return next_[h - 1][k][increment_index(h, p, a, o)];
  }

  std::int64_t stored_cells() const { return cells_; }

 protected:
  CommonGame(PosgModel model, SharingPattern pattern, int memory);

  // Forward closure; derived constructors call this once their tables are
  // ready. Throws CapacityError past `budget` predictive cells.
  void Build(std::int64_t budget);

  // T_h(a) O_{h+1}, cached per (h, a).
  const Mat& push(int h, int a) const { return push_[h - 1][a]; }

  PosgModel model_;
  SharingPattern pattern_;
  int memory_;
  std::vector<Mat> rewards_;

 private:
  std::vector<std::vector<InfoKey>> keys_;
  std::vector<std::map<InfoKey, int>> index_;
  std::vector<PrivateSpace> spaces_;
  std::vector<std::vector<Mat>> predictive_;
  std::vector<std::vector<InfoKey>> increments_;
  std::vector<std::vector<int>> z_index_;
  std::vector<std::vector<std::vector<int>>> next_;
  std::vector<std::vector<Mat>> push_;
  std::int64_t cells_ = 0;
};

// Consistent-model marginals for one key and prescription profile: the law
// of z_{h+1} (indexed like CommonGame::increment) and of o_{h+1}.
struct StepDistribution {
  Vec z;
  Vec o;
};

StepDistribution step_distribution(const CommonGame& game, int h,
                                   const Mat& predictive, const Mat& weights);

}  // namespace posgci

#endif  // POSGCI_COMMON_GAME_H_
