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

// Hand-built models for unit tests.

#ifndef POSGCI_TESTS_FIXTURES_H_
#define POSGCI_TESTS_FIXTURES_H_

#include <vector>

#include "posgci/model.h"

namespace posgci::fixture {

// Uniform transitions and emissions, constant reward `rho`.
inline PosgModel UniformModel(int S, std::vector<int> action_counts,
                              std::vector<int> obs_counts, int H,
                              double rho = 0.5) {
  PosgModel m;
  m.name = "uniform";
  m.horizon = H;
  m.num_agents = static_cast<int>(action_counts.size());
  m.num_states = S;
  m.action_counts = std::move(action_counts);
  m.obs_counts = std::move(obs_counts);
  const int A = m.num_joint_actions(), O = m.num_joint_obs();
  m.initial = Vec::Constant(S, 1.0 / S);
  m.transitions.assign(H, std::vector<Mat>(A, Mat::Constant(S, S, 1.0 / S)));
  m.emissions.assign(H + 1, Mat::Constant(S, O, 1.0 / O));
  m.rewards.assign(H, Mat::Constant(O, m.num_agents, rho));
  return m;
}

// Single agent, S = O = 2, identity emission, transitions swap the state
// regardless of the action, start in state 0.
inline PosgModel SwapModel(int H) {
  PosgModel m = UniformModel(2, {2}, {2}, H);
  m.name = "swap";
  m.initial = Vec::Unit(2, 0);
  Mat swap(2, 2);
  swap << 0, 1, 1, 0;
  for (auto& step : m.transitions) {
    for (Mat& t : step) t = swap;
  }
  for (Mat& e : m.emissions) e = Mat::Identity(2, 2);
  for (int h = 2; h <= H + 1; ++h) {
    m.rewards[h - 2] << 0.0, 1.0;
  }
  return m;
}

}  // namespace posgci::fixture

#endif  // POSGCI_TESTS_FIXTURES_H_
