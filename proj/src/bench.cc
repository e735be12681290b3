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

#include "posgci/bench.h"

namespace posgci {

namespace {

constexpr double kListenAccuracy = 0.85;

int DoorEvent(int action, int tiger) {
  if (action == 0) return 0;
  const int door = action - 1;  // 0 left, 1 right
  return door == tiger ? 2 : 1;
}

}  // namespace

int dectiger_state(int tiger, int event0, int event1) {
  return tiger * 9 + event0 * 3 + event1;
}

double dectiger_raw_reward(int e0, int e1) {
  if (e0 > e1) std::swap(e0, e1);
  if (e0 == 0 && e1 == 0) return -2.0;
  if (e0 == 0 && e1 == 1) return 9.0;
  if (e0 == 0 && e1 == 2) return -101.0;
  if (e0 == 1 && e1 == 1) return 20.0;
  if (e0 == 2 && e1 == 2) return -50.0;
  return -100.0;  // one gold, one tiger: different doors
}

PosgModel dectiger(int horizon) {
  if (horizon < 1) throw ConfigError("dectiger: horizon must be >= 1");
  PosgModel m;
  m.name = "dectiger";
  m.horizon = horizon;
  m.num_agents = 2;
  m.num_states = 18;
  m.action_counts = {3, 3};
  m.obs_counts = {6, 6};
  m.reward_map = RewardAffine{-101.0, 121.0};
  const int S = 18, A = 9, O = 36;

  std::vector<Mat> step(A, Mat::Zero(S, S));
  for (int s = 0; s < S; ++s) {
    const int tiger = s / 9;
    for (int a = 0; a < A; ++a) {
      const int a0 = a / 3, a1 = a % 3;
      const int e0 = DoorEvent(a0, tiger), e1 = DoorEvent(a1, tiger);
      if (a0 == 0 && a1 == 0) {
        step[a](s, dectiger_state(tiger, e0, e1)) = 1.0;
      } else {
        step[a](s, dectiger_state(0, e0, e1)) = 0.5;
        step[a](s, dectiger_state(1, e0, e1)) = 0.5;
      }
    }
  }
  Mat emit = Mat::Zero(S, O);
  for (int s = 0; s < S; ++s) {
    const int tiger = s / 9, e0 = (s / 3) % 3, e1 = s % 3;
    const bool informative = e0 == 0 && e1 == 0;
    for (int h0 = 0; h0 < 2; ++h0) {
      for (int h1 = 0; h1 < 2; ++h1) {
        auto p = [&](int heard) {
          if (!informative) return 0.5;
          return heard == tiger ? kListenAccuracy : 1.0 - kListenAccuracy;
        };
        emit(s, (h0 * 3 + e0) * 6 + (h1 * 3 + e1)) = p(h0) * p(h1);
      }
    }
  }
  Mat reward(O, 2);
  for (int o = 0; o < O; ++o) {
    const int e0 = (o / 6) % 3, e1 = (o % 6) % 3;
    const double r = m.reward_map->to_normalized(dectiger_raw_reward(e0, e1));
    reward(o, 0) = r;
    reward(o, 1) = r;
  }
  m.transitions.assign(horizon, step);
  m.emissions.assign(horizon + 1, emit);
  m.rewards.assign(horizon, reward);
  m.initial = Vec::Zero(S);
  m.initial[dectiger_state(0, 0, 0)] = 0.5;
  m.initial[dectiger_state(1, 0, 0)] = 0.5;
  return m;
}

PosgModel random_observable_posg(std::uint64_t seed, int num_states,
                                 const std::vector<int>& action_counts,
                                 const std::vector<int>& obs_counts,
                                 int horizon, double eta,
                                 const RandomPosgOptions& options) {
  PosgModel m;
  m.name = "random_observable";
  m.horizon = horizon;
  m.num_agents = static_cast<int>(action_counts.size());
  m.num_states = num_states;
  m.action_counts = action_counts;
  m.obs_counts = obs_counts;
  if (obs_counts.size() != action_counts.size()) {
    throw ModelError("random_observable_posg: one observation count per agent");
  }
  const int S = num_states, A = m.num_joint_actions(), O = m.num_joint_obs();
  if (O < S) {
    throw ModelError("random_observable_posg: joint observation alphabet (" +
                     std::to_string(O) + ") smaller than the state space (" +
                     std::to_string(S) + ")");
  }
  if (!(eta >= 0.0 && eta <= 1.0)) {
    throw ModelError("random_observable_posg: eta must lie in [0,1]");
  }
  if (options.zero_sum && m.num_agents != 2) {
    throw ModelError("random_observable_posg: zero-sum needs two agents");
  }
  Rng rng(seed);
  m.initial = rng.simplex(S);
  for (int h = 1; h <= horizon; ++h) {
    std::vector<Mat> per_a(A, Mat(S, S));
    for (int s = 0; s < S; ++s) {
      Vec shared = rng.simplex(S);
      std::vector<Vec> first(action_counts[0]);
      for (auto& v : first) v = rng.simplex(S);
      for (int a = 0; a < A; ++a) {
        switch (options.influence) {
          case ActionInfluence::kAll:
            per_a[a].row(s) = rng.simplex(S).transpose();
            break;
          case ActionInfluence::kFirstAgent:
            per_a[a].row(s) = first[m.split_action(a)[0]].transpose();
            break;
          case ActionInfluence::kNone:
            per_a[a].row(s) = shared.transpose();
            break;
        }
      }
    }
    m.transitions.push_back(std::move(per_a));
  }
  Mat emit = Mat::Constant(S, O, eta / O);
  for (int s = 0; s < S; ++s) emit(s, s) += 1.0 - eta;
  m.emissions.assign(horizon + 1, emit);
  for (int h = 2; h <= horizon + 1; ++h) {
    Mat r(O, m.num_agents);
    for (int o = 0; o < O; ++o) {
      for (int i = 0; i < m.num_agents; ++i) r(o, i) = rng.uniform();
      if (options.zero_sum) r(o, 1) = 1.0 - r(o, 0);
    }
    m.rewards.push_back(std::move(r));
  }
  return m;
}

PosgModel matching_pennies_posg(int horizon) {
  PosgModel m;
  m.name = "matching_pennies";
  m.horizon = horizon;
  m.num_agents = 2;
  m.num_states = 4;
  m.action_counts = {2, 2};
  m.obs_counts = {2, 2};
  m.initial = Vec::Constant(4, 0.25);
  std::vector<Mat> step(4, Mat::Zero(4, 4));
  for (int a = 0; a < 4; ++a) step[a].col(a).setOnes();
  m.transitions.assign(horizon, step);
  // State s = (a0, a1) of the previous round; agent 0 sees a1, agent 1
  // sees a0.
  Mat emit = Mat::Zero(4, 4);
  for (int s = 0; s < 4; ++s) emit(s, m.join_obs({s % 2, s / 2})) = 1.0;
  m.emissions.assign(horizon + 1, emit);
  Mat r(4, 2);
  for (int o = 0; o < 4; ++o) {
    auto v = m.split_obs(o);
    r(o, 0) = v[0] == v[1] ? 1.0 : 0.0;
    r(o, 1) = 1.0 - r(o, 0);
  }
  m.rewards.assign(horizon, r);
  return m;
}

}  // namespace posgci
