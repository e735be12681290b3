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

#include "posgci/enumerate.h"

namespace posgci {

namespace {

struct Walker {
  const PosgModel& model;
  const GeneralPolicy& policy;
  int max_step;
  const HistoryVisitor& visit;
  std::int64_t budget;
  std::int64_t nodes = 0;
  History hist;

  void Run(int h, const Vec& alpha) {
    if (++nodes > budget) {
      throw CapacityError("history enumeration exceeded node budget", nodes);
    }
    if (!visit(h, hist, alpha) || h >= max_step) return;
    Vec pi = policy(h, hist);
    for (int a = 0; a < model.num_joint_actions(); ++a) {
      if (pi[a] <= 0.0) continue;
      Vec next = model.T(h, a).transpose() * alpha * pi[a];
      const Mat& e = model.O(h + 1);
      for (int o = 0; o < model.num_joint_obs(); ++o) {
        Vec joint = next.cwiseProduct(e.col(o));
        if (joint.sum() <= 0.0) continue;
        hist.actions.push_back(a);
        hist.observations.push_back(o);
        Run(h + 1, joint);
        hist.actions.pop_back();
        hist.observations.pop_back();
      }
    }
  }
};

}  // namespace

void for_each_history(const PosgModel& model, const GeneralPolicy& policy,
                      int max_step, const HistoryVisitor& visit,
                      std::int64_t node_budget) {
  Walker w{model, policy, max_step, visit, node_budget, 0, {}};
  w.Run(1, model.initial);
}

Vec state_occupancy(const PosgModel& model, const GeneralPolicy& policy,
                    int h) {
  Vec d = Vec::Zero(model.num_states);
  for_each_history(model, policy, h,
                   [&](int step, const History&, const Vec& alpha) {
                     if (step == h) d += alpha;
                     return step < h;
                   });
  return d;
}

}  // namespace posgci
