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

#ifndef POSGCI_BENCH_H_
#define POSGCI_BENCH_H_

#include <cstdint>
#include <string>
#include <vector>

#include "posgci/model.h"

namespace posgci {

// Two-agent Dec-Tiger with rewards carried by the next observation.
//
// State = (tiger side, event of agent 0, event of agent 1), events in
// {listened, found gold, found tiger} describing the outcome of the last
// action. Agent i observes (heard side, own event): O_i = 6, index
// hear * 3 + event. Hearing is informative (0.85) only after a joint
// listen; any door opening resets the tiger uniformly.
//
// Classic team rewards by event pair: both listen -2, one listens and the
// other finds gold +9 or the tiger -101, both gold +20, both tiger -50,
// different doors -100. Normalized reward = (raw + 101) / 121.
PosgModel dectiger(int horizon);

// Action indices: 0 listen, 1 open left, 2 open right.
// Event indices: 0 listened, 1 gold, 2 tiger. Side: 0 left, 1 right.
int dectiger_state(int tiger, int event0, int event1);
double dectiger_raw_reward(int event0, int event1);

enum class ActionInfluence {
  kAll,         // transitions depend on the joint action
  kFirstAgent,  // only agent 0's action matters
  kNone,        // transitions ignore actions
};

struct RandomPosgOptions {
  bool zero_sum = false;  // r_1 = 1 - r_0 (two agents)
  ActionInfluence influence = ActionInfluence::kAll;
};

// Emission rows (1 - eta) one_hot(s) + eta Unif(O_joint); transitions,
// initial distribution and rewards drawn from the seed.
PosgModel random_observable_posg(std::uint64_t seed, int num_states,
                                 const std::vector<int>& action_counts,
                                 const std::vector<int>& obs_counts,
                                 int horizon, double eta,
                                 const RandomPosgOptions& options = {});

// Repeated matching pennies with the previous joint action as state; each
// agent observes the other's last move, agent 0 wins on a match.
PosgModel matching_pennies_posg(int horizon);

}  // namespace posgci

#endif  // POSGCI_BENCH_H_
