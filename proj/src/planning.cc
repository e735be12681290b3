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

#include "posgci/planning.h"

#include <algorithm>
#include <chrono>

#include "posgci/enumerate.h"

namespace posgci {

namespace {

// Key of `policy` for a key of a game with memory `from`.
InfoKey PolicyKey(const SharingPattern& pattern, int h, const InfoKey& key,
                  int from, int to) {
  if (to > from && compressed_items(pattern, to, h).size() !=
                       compressed_items(pattern, from, h).size()) {
    throw ConfigError("policy keeps more common information (L=" +
                      std::to_string(to) + ") than the game provides (L=" +
                      std::to_string(from) + ")");
  }
  return compress(pattern, h, key, from, to);
}

MixedProfile LookupOrUniform(const CommonInfoPolicy& policy, int h,
                             const InfoKey& key, const PrivateSpace& space) {
  if (const MixedProfile* m = policy.find(h, key)) return *m;
  return single(uniform_profile(space.counts, policy.action_counts));
}

}  // namespace

const MixedProfile* CommonInfoPolicy::find(int h, const InfoKey& key) const {
  if (h < 1 || h > static_cast<int>(table.size())) return nullptr;
  auto it = table[h - 1].find(key);
  return it == table[h - 1].end() ? nullptr : &it->second;
}

Vec CommonInfoPolicy::action_distribution(int h, const InfoKey& key,
                                          const std::vector<int>& priv,
                                          const PrivateSpace& space) const {
  const int A = static_cast<int>(radix_product(action_counts));
  const MixedProfile* mix = find(h, key);
  if (mix == nullptr) return Vec::Constant(A, 1.0 / A);
  const int n = static_cast<int>(action_counts.size());
  Vec dist = Vec::Zero(A);
  for (int a = 0; a < A; ++a) {
    std::vector<int> ad = decode_joint(a, action_counts);
    for (const auto& comp : mix->components) {
      double v = 1.0;
      for (int j = 0; j < n; ++j) {
        if (priv[j] >= comp[j].rows() || space.counts[j] != comp[j].rows()) {
          throw ConfigError("policy private-information layout mismatch");
        }
        v *= comp[j](priv[j], ad[j]);
      }
      dist[a] += v;
    }
  }
  return dist / mix->size();
}

Vec CommonInfoPolicy::act(const PosgModel& model,
                          const History& history) const {
  const int h = history.step();
  InfoState st = split_history(pattern, model, history);
  InfoKey key = compress(pattern, h, st.common, h + pattern.delay + 1,
                         std::min(memory, h + pattern.delay + 1));
  return action_distribution(h, key, st.priv,
                             private_space(pattern, model, h));
}

GeneralPolicy as_general(const CommonInfoPolicy& policy,
                         const PosgModel& model) {
  return GeneralPolicy::Callback(
      [policy, &model](int, const History& hist) {
        return policy.act(model, hist);
      });
}

Json policy_to_json(const CommonInfoPolicy& policy) {
  Json doc;
  doc["pattern"] = policy.pattern.name();
  doc["delay"] = policy.pattern.delay;
  doc["memory"] = policy.memory;
  doc["horizon"] = policy.horizon;
  doc["action_counts"] = policy.action_counts;
  Json steps = Json::array();
  for (const auto& step : policy.table) {
    Json entries = Json::array();
    for (const auto& [key, mix] : step) {
      Json comps = Json::array();
      for (const auto& comp : mix.components) {
        Json agents = Json::array();
        for (const Mat& g : comp) agents.push_back(mat_to_json(g));
        comps.push_back(std::move(agents));
      }
      entries.push_back({{"key", key}, {"components", std::move(comps)}});
    }
    steps.push_back(std::move(entries));
  }
  doc["steps"] = std::move(steps);
  return doc;
}

CommonInfoPolicy policy_from_json(const Json& doc) {
  reject_unknown_keys(doc,
                      {"pattern", "delay", "memory", "horizon",
                       "action_counts", "steps"},
                      "policy");
  CommonInfoPolicy p;
  p.pattern = SharingPattern::FromName(doc.at("pattern").get<std::string>(),
                                       doc.at("delay").get<int>());
  p.memory = doc.at("memory").get<int>();
  p.horizon = doc.at("horizon").get<int>();
  p.action_counts = doc.at("action_counts").get<std::vector<int>>();
  for (const Json& step : doc.at("steps")) {
    std::map<InfoKey, MixedProfile> entries;
    for (const Json& e : step) {
      reject_unknown_keys(e, {"key", "components"}, "policy entry");
      MixedProfile mix;
      for (const Json& comp : e.at("components")) {
        PrescriptionProfile prof;
        for (const Json& g : comp) prof.push_back(mat_from_json(g, "policy"));
        mix.components.push_back(std::move(prof));
      }
      entries[e.at("key").get<InfoKey>()] = std::move(mix);
    }
    p.table.push_back(std::move(entries));
  }
  if (static_cast<int>(p.table.size()) != p.horizon) {
    throw ConfigError("policy has " + std::to_string(p.table.size()) +
                      " steps, horizon is " + std::to_string(p.horizon));
  }
  return p;
}

double EquilibriumSolution::max_gap() const {
  double g = 0.0;
  for (const auto& step : gaps) {
    for (double x : step) g = std::max(g, x);
  }
  return g;
}

StageGame stage_game(const CommonGame& game, int h, int k,
                     const std::vector<Vec>& next_values) {
  const int n = game.num_agents();
  const Vec zero = Vec::Zero(n);
  return StageGame::FromPredictive(
      game.private_space(h).counts, game.model().action_counts,
      game.predictive(h, k),
      [&](int i, int o) { return game.reward(i, h + 1, o); },
      [&](int p, int a, int o) -> Vec {
        const int next = game.next_key(h, k, p, a, o);
        return next >= 0 ? next_values[next] : zero;
      },
      game.horizon() + 1.0);
}

EquilibriumSolution solve_backward(const CommonGame& game, SolverKind kind,
                                   const SolverOptions& options) {
  const int H = game.horizon();
  EquilibriumSolution sol;
  sol.kind = kind;
  sol.values.resize(H);
  sol.gaps.resize(H);
  sol.iterations.resize(H);
  sol.wall_ms.assign(H, 0.0);
  sol.policy.pattern = game.pattern();
  sol.policy.memory = game.memory();
  sol.policy.horizon = H;
  sol.policy.action_counts = game.model().action_counts;
  sol.policy.table.resize(H);
  const std::vector<Vec> none;
  for (int h = H; h >= 1; --h) {
    auto t0 = std::chrono::steady_clock::now();
    const std::vector<Vec>& next = h < H ? sol.values[h] : none;
    int downgraded = 0;
    for (int k = 0; k < game.num_keys(h); ++k) {
      StageGame g = stage_game(game, h, k, next);
      StageSolution s;
      try {
        s = solve_stage(g, kind, options);
      } catch (const ConvergenceError& e) {
        throw ConvergenceError("h=" + std::to_string(h) + " key " +
                                   key_to_string(game.key(h, k)) + ": " +
                                   e.solver(),
                               e.achieved_gap());
      }
      if (!s.warning.empty()) ++downgraded;
      Vec v(game.num_agents());
      for (int i = 0; i < game.num_agents(); ++i) v[i] = stage_q(g, s.profile, i);
      sol.values[h - 1].push_back(v);
      sol.gaps[h - 1].push_back(s.gap);
      sol.iterations[h - 1].push_back(s.iterations);
      sol.policy.table[h - 1][game.key(h, k)] = std::move(s.profile);
    }
    if (downgraded > 0) {
      sol.warnings.push_back("h=" + std::to_string(h) + ": " +
                             std::to_string(downgraded) +
                             " stage games were not zero-sum; solved as CCE");
    }
    sol.wall_ms[h - 1] = std::chrono::duration<double, std::milli>(
                             std::chrono::steady_clock::now() - t0)
                             .count();
  }
  return sol;
}

EquilibriumSolution vi_common_info(const PosgModel& model,
                                   const SharingPattern& pattern,
                                   SolverKind kind,
                                   const SolverOptions& options) {
  ApproxCommonModel exact = ApproxCommonModel::Exact(model, pattern);
  return solve_backward(exact, kind, options);
}

EquilibriumSolution vi_approx(const CommonGame& model, SolverKind kind,
                              const SolverOptions& options) {
  return solve_backward(model, kind, options);
}

std::vector<std::vector<Vec>> evaluate_policy(const CommonGame& game,
                                              const CommonInfoPolicy& policy) {
  const int H = game.horizon(), n = game.num_agents();
  const int A = game.joint_actions(), O = game.joint_obs();
  std::vector<std::vector<Vec>> values(H);
  for (int h = H; h >= 1; --h) {
    const PrivateSpace& ps = game.private_space(h);
    for (int k = 0; k < game.num_keys(h); ++k) {
      InfoKey pk = PolicyKey(game.pattern(), h, game.key(h, k), game.memory(),
                             policy.memory);
      Mat w = profile_weights(ps.counts, game.model().action_counts,
                              LookupOrUniform(policy, h, pk, ps));
      const Mat& J = game.predictive(h, k);
      Vec v = Vec::Zero(n);
      for (int p = 0; p < ps.joint; ++p) {
        for (int a = 0; a < A; ++a) {
          if (w(p, a) == 0.0) continue;
          for (int o = 0; o < O; ++o) {
            const double m = w(p, a) * J(p * A + a, o);
            if (m == 0.0) continue;
            for (int i = 0; i < n; ++i) v[i] += m * game.reward(i, h + 1, o);
            const int next = game.next_key(h, k, p, a, o);
            if (next >= 0) v += m * values[h][next];
          }
        }
      }
      values[h - 1].push_back(v);
    }
  }
  return values;
}

BestResponse best_response_policy(const CommonGame& game,
                                  const CommonInfoPolicy& policy, int i,
                                  SolverKind kind) {
  const int H = game.horizon(), n = game.num_agents();
  BestResponse br;
  br.policy.pattern = game.pattern();
  br.policy.memory = game.memory();
  br.policy.horizon = H;
  br.policy.action_counts = game.model().action_counts;
  br.policy.table.resize(H);
  br.values.resize(H);
  std::vector<Vec> next;
  for (int h = H; h >= 1; --h) {
    const PrivateSpace& ps = game.private_space(h);
    std::vector<Vec> current;
    for (int k = 0; k < game.num_keys(h); ++k) {
      StageGame g = stage_game(game, h, k, next);
      InfoKey pk = PolicyKey(game.pattern(), h, game.key(h, k), game.memory(),
                             policy.memory);
      MixedProfile mix = LookupOrUniform(policy, h, pk, ps);
      if (kind == SolverKind::kCE) {
        SwapModification swap = best_swap(g, mix, i);
        for (auto& comp : mix.components) comp[i] = apply_swap(swap, comp[i]);
      } else {
        Prescription gi = prescription_best_response(g, mix, i);
        for (auto& comp : mix.components) comp[i] = gi;
      }
      const double v = stage_q(g, mix, i);
      Vec vv = Vec::Zero(n);
      vv[i] = v;
      current.push_back(vv);
      br.values[h - 1].push_back(v);
      br.policy.table[h - 1][game.key(h, k)] = std::move(mix);
    }
    next = std::move(current);
  }
  br.root_value = br.values[0][0];
  return br;
}

Vec policy_values_exact(const PosgModel& model, const GeneralPolicy& policy) {
  Vec total = Vec::Zero(model.num_agents);
  for_each_history(model, policy, model.horizon + 1,
                   [&](int h, const History& hist, const Vec& alpha) {
                     if (h >= 2) {
                       const double mass = alpha.sum();
                       for (int i = 0; i < model.num_agents; ++i) {
                         total[i] += mass * model.r(i, h, hist.o(h));
                       }
                     }
                     return true;
                   });
  return total;
}

double policy_value_exact(const PosgModel& model, const GeneralPolicy& policy,
                          int i) {
  return policy_values_exact(model, policy)[i];
}

SolverKind deviation_kind(SolverKind kind) {
  return kind == SolverKind::kCE ? SolverKind::kCE : SolverKind::kCCE;
}

GapReport policy_gap(const ApproxCommonModel& exact_game,
                     const CommonInfoPolicy& policy, SolverKind kind) {
  const PosgModel& model = exact_game.model();
  GapReport rep;
  rep.values = policy_values_exact(model, as_general(policy, model));
  rep.deviation = Vec::Zero(model.num_agents);
  rep.gap = -1e300;
  for (int i = 0; i < model.num_agents; ++i) {
    BestResponse br =
        best_response_policy(exact_game, policy, i, deviation_kind(kind));
    rep.deviation[i] =
        policy_value_exact(model, as_general(br.policy, model), i);
    rep.per_agent.push_back(rep.deviation[i] - rep.values[i]);
    rep.gap = std::max(rep.gap, rep.per_agent.back());
  }
  return rep;
}

GapReport policy_gap(const PosgModel& model, const CommonInfoPolicy& policy,
                     SolverKind kind) {
  return policy_gap(ApproxCommonModel::Exact(model, policy.pattern), policy,
                    kind);
}

}  // namespace posgci
