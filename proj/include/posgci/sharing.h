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

#ifndef POSGCI_SHARING_H_
#define POSGCI_SHARING_H_

#include <string>
#include <vector>

#include "posgci/common.h"
#include "posgci/model.h"

namespace posgci {

enum class PatternKind {
  kOneStepDelay,
  kAsymmetricControllerDelay,
  kOneDirectional,
  kUncontrolledDelay,
  kSymmetric,
};

// Information-sharing structure. Agent 0 is the controller / the agent whose
// observation is broadcast immediately for the two-agent variants.
struct SharingPattern {
  PatternKind kind = PatternKind::kOneStepDelay;
  int delay = 1;

  static SharingPattern OneStepDelay() { return {PatternKind::kOneStepDelay, 1}; }
  static SharingPattern Symmetric() { return {PatternKind::kSymmetric, 1}; }
  static SharingPattern OneDirectional() {
    return {PatternKind::kOneDirectional, 1};
  }
  static SharingPattern UncontrolledDelay(int d);
  // Only the variant where agent 1 does not influence transitions exists.
  static SharingPattern AsymmetricControllerDelay(int d, bool case_a = true);
  static SharingPattern FromName(const std::string& name, int d);

  std::string name() const;
  bool uses_delay() const {
    return kind == PatternKind::kUncontrolledDelay ||
           kind == PatternKind::kAsymmetricControllerDelay;
  }
  // Throws ModelError when the model cannot carry this structure.
  void check_model(const PosgModel& model) const;
};

struct CompressionScheme {
  int memory = 0;  // L
};

// One entry of an information tuple: a joint or per-agent action or
// observation stamped with its step.
enum class ItemKind { kJointAction, kAgentAction, kJointObs, kAgentObs };

struct Item {
  ItemKind kind;
  int agent = -1;
  int time = 0;
  bool operator==(const Item&) const = default;
};

// Common information as the list of item values in a fixed per-step layout.
using InfoKey = std::vector<int>;

std::string key_to_string(const InfoKey& key);

// z_{h+1} layout.
std::vector<Item> increment_items(const SharingPattern& pattern, int h);
// c_h layout: z_2 ++ ... ++ z_h.
std::vector<Item> common_items(const SharingPattern& pattern, int h);
std::vector<Item> private_items(const SharingPattern& pattern, int h,
                                int agent);
// Items of c_h retained by finite-memory compression of length L.
bool keeps_item(const SharingPattern& pattern, int memory, int h,
                const Item& item);
std::vector<Item> compressed_items(const SharingPattern& pattern, int memory,
                                   int h);
int item_radix(const PosgModel& model, const Item& item);
int item_value(const PosgModel& model, const Item& item,
               const History& history);

// Per-agent private-information cardinalities and the joint index layout
// (mixed radix over agents, agent 0 most significant).
struct PrivateSpace {
  std::vector<int> counts;
  int joint = 1;
  int encode(const std::vector<int>& per_agent) const {
    return static_cast<int>(encode_joint(per_agent, counts));
  }
  std::vector<int> decode(int joint_index) const {
    return decode_joint(joint_index, counts);
  }
};

PrivateSpace private_space(const SharingPattern& pattern,
                           const PosgModel& model, int h);

struct InfoState {
  InfoKey common;
  std::vector<int> priv;  // per-agent private index
};

InfoState split_history(const SharingPattern& pattern, const PosgModel& model,
                        const History& history);

struct Evolution {
  InfoKey increment;  // z_{h+1}
  std::vector<int> priv;  // p_{h+1}
};

// (z_{h+1}, p_{h+1}) from (p_h, a_h, o_{h+1}).
Evolution evolve_information(const SharingPattern& pattern,
                             const PosgModel& model, int h,
                             const std::vector<int>& priv, int a, int o_next);

// Restricts an L_from-compressed key at step h to L_to <= L_from. Use
// L_from >= H for exact common information.
InfoKey compress(const SharingPattern& pattern, int h, const InfoKey& key,
                 int memory_from, int memory_to);
InfoKey compress(const SharingPattern& pattern, const CompressionScheme& scheme,
                 int h, const InfoKey& exact);
// phi-hat: compressed key at h+1 from the compressed key at h and z_{h+1}.
InfoKey evolve_compressed(const SharingPattern& pattern, int memory, int h,
                          const InfoKey& key, const InfoKey& increment);

int hat_memory(const SharingPattern& pattern, const CompressionScheme& scheme);
// Step at which the finite-memory prior is placed for beliefs at step h.
int window_start(const SharingPattern& pattern, int memory, int h);

struct CompressionStats {
  int hat_memory = 0;
  std::vector<int> common_counts;      // |C_h|, exact, reachable
  std::vector<int> compressed_counts;  // |C^_h|
  std::vector<int> private_counts;     // reachable joint p_h
  std::vector<int> increment_counts;   // |Z_{h+1}| reachable, h = 1..H
};

CompressionStats compression_stats(const SharingPattern& pattern,
                                   const CompressionScheme& scheme,
                                   const PosgModel& model);

// P(s_h, p_h | c_h) as an S x P_joint matrix via exact filtering.
Mat exact_common_belief(const SharingPattern& pattern, const PosgModel& model,
                        const InfoKey& common, int h);

// Same closed forms on a compressed key, with the finite-memory filter
// started from `prior` at window_start(pattern, L, h).
Mat approx_common_belief(const SharingPattern& pattern,
                         const CompressionScheme& scheme,
                         const PosgModel& model, const InfoKey& key, int h,
                         const Vec& prior);

}  // namespace posgci

#endif  // POSGCI_SHARING_H_
