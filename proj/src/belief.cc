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

#include "posgci/belief.h"

#include <algorithm>

namespace posgci {

Vec transition_push(const PosgModel& model, int h, const Vec& belief, int a) {
  return model.T(h, a).transpose() * belief;
}

Mat marginal_emission(const PosgModel& model, int h, int agent) {
  const Mat& e = model.O(h);
  Mat out = Mat::Zero(model.num_states, model.obs_counts[agent]);
  for (int o = 0; o < model.num_joint_obs(); ++o) {
    int oi = model.split_obs(o)[agent];
    out.col(oi) += e.col(o);
  }
  return out;
}

Vec belief_step(const PosgModel& model, int h, const Vec& belief, int a,
                int o) {
  return posterior_update<double>(transition_push(model, h, belief, a),
                                  model.O(h + 1), o);
}

namespace {

// Runs the filter from `start` at step k through step h.
Vec RunFilter(const PosgModel& model, Vec b, int k, int h,
              const std::vector<int>& actions,
              const std::vector<int>& observations, FilterMode mode, int agent,
              int own_obs) {
  const int needed_obs = mode == FilterMode::kPostObs ? h - k : h - k - 1;
  if (static_cast<int>(actions.size()) != h - k ||
      static_cast<int>(observations.size()) != std::max(0, needed_obs)) {
    throw std::invalid_argument("filter: window lengths inconsistent with h");
  }
  for (int t = k; t < h; ++t) {
    b = transition_push(model, t, b, actions[t - k]);
    bool last = t + 1 == h;
    if (!last || mode == FilterMode::kPostObs) {
      b = posterior_update<double>(b, model.O(t + 1), observations[t - k]);
    }
  }
  if (mode == FilterMode::kIndividual) {
    if (h < 2 || own_obs < 0) {
      throw std::invalid_argument("individual filter needs h >= 2 and o_i");
    }
    b = posterior_update<double>(b, marginal_emission(model, h, agent),
                                 own_obs);
  }
  return b;
}

}  // namespace

Vec exact_filter(const PosgModel& model, const std::vector<int>& actions,
                 const std::vector<int>& observations, FilterMode mode,
                 int agent, int own_obs) {
  const int h = static_cast<int>(actions.size()) + 1;
  return RunFilter(model, model.initial, 1, h, actions, observations, mode,
                   agent, own_obs);
}

Vec approx_filter(const PosgModel& model, int h, int window_start,
                  const std::vector<int>& actions,
                  const std::vector<int>& observations, const Vec& prior,
                  FilterMode mode, int agent, int own_obs) {
  const int k = std::max(1, window_start);
  const Vec& start = k == 1 ? model.initial : prior;
  if (start.size() != model.num_states) {
    throw std::invalid_argument("approx_filter: prior has wrong length");
  }
  return RunFilter(model, start, k, h, actions, observations, mode, agent,
                   own_obs);
}

double observability_estimate(const PosgModel& model, int h) {
  const Mat& e = model.O(h);
  double best = 1.0;
  for (int s = 0; s < model.num_states; ++s) {
    for (int t = s + 1; t < model.num_states; ++t) {
      best = std::min(best, 0.5 * (e.row(s) - e.row(t)).cwiseAbs().sum());
    }
  }
  return best;
}

}  // namespace posgci
