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

#include "posgci/learning.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "posgci/enumerate.h"

namespace posgci {

void LearnConfig::validate() const {
  auto unit = [](double x, const char* name) {
    if (!(x > 0.0 && x < 1.0)) {
      throw ConfigError(std::string("learn.") + name + " must lie in (0,1)");
    }
  };
  if (n0 <= 0) throw ConfigError("learn.n0 must be positive");
  if (n2 <= 0) throw ConfigError("learn.n2 must be positive");
  unit(zeta1, "zeta1");
  unit(zeta2, "zeta2");
  unit(theta1, "theta1");
  unit(theta2, "theta2");
  unit(delta1, "delta1");
  if (zeta2 > zeta1) throw ConfigError("learn.zeta2 must not exceed zeta1");
  if (!(eps_e > 0.0)) throw ConfigError("learn.eps_e must be positive");
  if (!(phi >= 0.0)) throw ConfigError("learn.phi must be nonnegative");
  if (!(constant_c > 0.0)) throw ConfigError("learn.constant_c must be positive");
  if (groups < 1) throw ConfigError("learn.groups must be >= 1");
  if (threads < 1) throw ConfigError("learn.threads must be >= 1");
}

std::int64_t n0_bound(const LearnConfig& c, std::int64_t max_private,
                      std::int64_t max_keys, std::int64_t actions,
                      std::int64_t observations, int horizon) {
  const double P = static_cast<double>(max_private);
  const double Ch = static_cast<double>(max_keys);
  const double A = static_cast<double>(actions);
  const double O = static_cast<double>(observations);
  const double H = horizon;
  const double first = c.constant_c * (P + std::log(4.0 * H * Ch / c.delta1)) /
                       (c.zeta1 * c.theta1 * c.theta1);
  const double second =
      c.constant_c * A * (O + std::log(4.0 * H * Ch * P * A / c.delta1)) /
      (c.zeta2 * c.theta2 * c.theta2);
  return static_cast<std::int64_t>(std::ceil(std::max(first, second)));
}

ExplorationPolicySet make_uniform_exploration(const PosgModel& model,
                                              int hat_memory) {
  ExplorationPolicySet set;
  set.hat_memory = hat_memory;
  for (int h = 1; h <= model.horizon; ++h) {
    set.policies.push_back(GeneralPolicy::Uniform(model.num_joint_actions()));
    set.uniform_from.push_back(1);
  }
  return set;
}

bool has_uniform_suffix(const ExplorationPolicySet& set) {
  if (set.policies.size() != set.uniform_from.size()) return false;
  for (size_t k = 0; k < set.policies.size(); ++k) {
    const int h = static_cast<int>(k) + 1;
    if (!set.policies[k].valid()) return false;
    if (set.uniform_from[k] > std::max(1, h - set.hat_memory)) return false;
  }
  return true;
}

Sampler model_sampler(const PosgModel& model, int threads) {
  return [&model, threads](const GeneralPolicy& policy, std::uint64_t seed,
                           std::int64_t count) {
    return sample_batch(model, policy, seed, static_cast<int>(count), threads);
  };
}

EmpiricalModel::EmpiricalModel(const PosgModel& shape, SharingPattern pattern,
                               CompressionScheme scheme,
                               std::vector<std::map<InfoKey, Counts>> counts,
                               std::vector<Mat> reward_estimate,
                               std::int64_t budget)
    : CommonGame(shape, pattern, scheme.memory), counts_(std::move(counts)) {
  if (static_cast<int>(counts_.size()) != horizon()) {
    throw ConfigError("empirical counts need one table per step");
  }
  rewards_ = std::move(reward_estimate);
  Build(budget);
  const int A = joint_actions();
  for (int h = 1; h <= horizon(); ++h) {
    for (int k = 0; k < num_keys(h); ++k) {
      auto it = counts_[h - 1].find(key(h, k));
      if (it == counts_[h - 1].end()) {
        ++unvisited_keys_;
        continue;
      }
      const Counts& c = it->second;
      for (Eigen::Index p = 0; p < c.phi.size(); ++p) {
        if (c.phi[p] <= 0.0) continue;
        for (int a = 0; a < A; ++a) {
          if (c.psi.row(p * A + a).sum() <= 0.0) ++unvisited_cells_;
        }
      }
    }
  }
}

Mat EmpiricalModel::compute_predictive(int h, const InfoKey& key) const {
  const int P = private_space(h).joint, A = joint_actions(), O = joint_obs();
  Mat joint = Mat::Zero(static_cast<Eigen::Index>(P) * A, O);
  auto it = counts_[h - 1].find(key);
  if (it == counts_[h - 1].end()) {
    joint.setConstant(1.0 / (static_cast<double>(P) * O));
    return joint;
  }
  const Counts& c = it->second;
  const Vec phat = c.phi / c.phi.sum();
  for (int p = 0; p < P; ++p) {
    if (phat[p] <= 0.0) continue;
    for (int a = 0; a < A; ++a) {
      const double total = c.psi.row(p * A + a).sum();
      if (total > 0.0) {
        joint.row(p * A + a) = phat[p] * c.psi.row(p * A + a) / total;
      } else {
        joint.row(p * A + a).setConstant(phat[p] / O);
      }
    }
  }
  return joint;
}

double EmpiricalModel::key_visits(int h, const InfoKey& key) const {
  auto it = counts_[h - 1].find(key);
  return it == counts_[h - 1].end() ? 0.0 : it->second.phi.sum();
}

double EmpiricalModel::cell_visits(int h, const InfoKey& key, int p,
                                   int a) const {
  auto it = counts_[h - 1].find(key);
  if (it == counts_[h - 1].end()) return 0.0;
  return it->second.psi.row(p * joint_actions() + a).sum();
}

EmpiricalModel construct_empirical(
    const Sampler& sampler, const PosgModel& shape,
    const ExplorationPolicySet& exploration, const SharingPattern& pattern,
    const CompressionScheme& scheme,
    const std::optional<std::vector<Mat>>& reward, const LearnConfig& config) {
  config.validate();
  const int H = shape.horizon, n = shape.num_agents;
  const int A = shape.num_joint_actions(), O = shape.num_joint_obs();
  if (static_cast<int>(exploration.policies.size()) != H) {
    throw ConfigError("exploration set needs one policy per step");
  }
  if (exploration.hat_memory != hat_memory(pattern, scheme) ||
      !has_uniform_suffix(exploration)) {
    throw ConfigError(
        "exploration policies must play uniformly over the last Lhat steps");
  }
  std::vector<std::map<InfoKey, EmpiricalModel::Counts>> counts(H);
  std::vector<Mat> reward_sum(H, Mat::Zero(O, n));
  std::vector<Vec> reward_visits(H, Vec::Zero(O));
  for (int h = 1; h <= H; ++h) {
    const auto items = compressed_items(pattern, scheme.memory, h);
    const PrivateSpace ps = private_space(pattern, shape, h);
    std::vector<std::vector<Item>> priv_items(n);
    std::vector<std::vector<int>> priv_radix(n);
    for (int i = 0; i < n; ++i) {
      priv_items[i] = private_items(pattern, h, i);
      for (const Item& it : priv_items[i]) {
        priv_radix[i].push_back(item_radix(shape, it));
      }
    }
    auto trajs = sampler(exploration.policies[h - 1],
                         Rng::Mix(config.seed, static_cast<std::uint64_t>(h)),
                         config.n0);
    InfoKey key(items.size());
    std::vector<int> priv(n);
    for (const Trajectory& tr : trajs) {
      History hist = tr.prefix(h);
      for (size_t q = 0; q < items.size(); ++q) {
        key[q] = item_value(shape, items[q], hist);
      }
      for (int i = 0; i < n; ++i) {
        std::vector<int> vals;
        for (const Item& it : priv_items[i]) {
          vals.push_back(item_value(shape, it, hist));
        }
        priv[i] = static_cast<int>(encode_joint(vals, priv_radix[i]));
      }
      const int p = ps.encode(priv);
      auto [it, fresh] = counts[h - 1].try_emplace(key);
      if (fresh) {
        it->second.phi = Vec::Zero(ps.joint);
        it->second.psi = Mat::Zero(static_cast<Eigen::Index>(ps.joint) * A, O);
      }
      it->second.phi[p] += 1.0;
      it->second.psi(p * A + tr.actions[h - 1], tr.observations[h - 1]) += 1.0;
      for (int t = 2; t <= H + 1; ++t) {
        const int o = tr.observations[t - 2];
        reward_visits[t - 2][o] += 1.0;
        for (int i = 0; i < n; ++i) reward_sum[t - 2](o, i) += tr.rewards[t - 2][i];
      }
    }
  }
  std::vector<Mat> rhat;
  if (reward) {
    rhat = *reward;
  } else {
    for (int t = 0; t < H; ++t) {
      Mat r = Mat::Zero(O, n);
      for (int o = 0; o < O; ++o) {
        if (reward_visits[t][o] > 0.0) {
          r.row(o) = reward_sum[t].row(o) / reward_visits[t][o];
        }
      }
      rhat.push_back(std::move(r));
    }
  }
  return EmpiricalModel(shape, pattern, scheme, std::move(counts),
                        std::move(rhat));
}

namespace {

struct RolloutStats {
  Vec mean;
  Vec var;
};

RolloutStats Rollout(const Sampler& sampler, const PosgModel& shape,
                     const CommonInfoPolicy& policy, std::uint64_t seed,
                     std::int64_t count) {
  auto trajs = sampler(as_general(policy, shape), seed, count);
  const int n = shape.num_agents;
  Vec sum = Vec::Zero(n), sq = Vec::Zero(n);
  for (const Trajectory& tr : trajs) {
    for (int i = 0; i < n; ++i) {
      const double r = tr.return_of(i);
      sum[i] += r;
      sq[i] += r * r;
    }
  }
  const double N = static_cast<double>(trajs.size());
  RolloutStats s;
  s.mean = sum / N;
  s.var = (sq / N - s.mean.cwiseProduct(s.mean)).cwiseMax(0.0);
  return s;
}

}  // namespace

SelectionResult policy_selection(
    const std::vector<const CommonGame*>& models,
    const std::vector<CommonInfoPolicy>& candidates, SolverKind kind,
    const LearnConfig& config, const Sampler& sampler,
    const PosgModel& shape) {
  const int K = static_cast<int>(candidates.size());
  if (K < 1 || models.size() != candidates.size()) {
    throw ConfigError("policy selection needs K >= 1 models and candidates");
  }
  SelectionResult res;
  res.score.assign(K, 0.0);
  res.standard_error.assign(K, 0.0);
  if (K == 1) {
    res.returns.push_back(Vec::Zero(shape.num_agents));
    return res;
  }
  const int n = shape.num_agents;
  const double N2 = static_cast<double>(config.n2);
  for (int j = 0; j < K; ++j) {
    RolloutStats base = Rollout(sampler, shape, candidates[j],
                                Rng::Mix(config.seed, 1000 + j), config.n2);
    res.returns.push_back(base.mean);
    double worst = -std::numeric_limits<double>::infinity();
    double worst_se = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int m = 0; m < K; ++m) {
        BestResponse br = best_response_policy(*models[m], candidates[j], i,
                                               deviation_kind(kind));
        RolloutStats dev = Rollout(
            sampler, shape, br.policy,
            Rng::Mix(config.seed,
                     2000 + static_cast<std::uint64_t>((i * K + j) * K + m)),
            config.n2);
        const double diff = dev.mean[i] - base.mean[i];
        if (diff > worst) {
          worst = diff;
          worst_se = std::sqrt(dev.var[i] / N2 + base.var[i] / N2);
        }
      }
    }
    res.score[j] = worst;
    res.standard_error[j] = worst_se;
  }
  res.index = static_cast<int>(
      std::min_element(res.score.begin(), res.score.end()) -
      res.score.begin());
  return res;
}

ExplorationGenerator uniform_exploration_generator() {
  return [](const PosgModel& shape, int hat_memory, const LearnConfig& config) {
    std::vector<ExplorationGroup> groups;
    for (int g = 0; g < config.groups; ++g) {
      groups.push_back({make_uniform_exploration(shape, hat_memory), {}});
    }
    return groups;
  };
}

LaciResult laci(const Sampler& sampler, const PosgModel& shape,
                const SharingPattern& pattern, const CompressionScheme& scheme,
                SolverKind kind, const LearnConfig& config,
                const ExplorationGenerator& generator) {
  config.validate();
  const int hat = hat_memory(pattern, scheme);
  std::vector<ExplorationGroup> groups = generator(shape, hat, config);
  if (groups.empty()) throw ConfigError("exploration generator gave no groups");
  std::vector<EmpiricalModel> models;
  LaciResult res;
  SolverOptions opt;
  opt.eps_e = config.eps_e;
  std::vector<CommonInfoPolicy> candidates;
  for (size_t g = 0; g < groups.size(); ++g) {
    LearnConfig sub = config;
    sub.seed = Rng::Mix(config.seed, 7919 + g);
    models.push_back(construct_empirical(sampler, shape, groups[g].policies,
                                         pattern, scheme, groups[g].reward,
                                         sub));
    res.unvisited_keys.push_back(models.back().unvisited_keys());
    res.unvisited_cells.push_back(models.back().unvisited_cells());
    int keys = 0;
    for (int h = 1; h <= shape.horizon; ++h) keys += models.back().num_keys(h);
    res.model_keys.push_back(keys);
    res.candidates.push_back(vi_approx(models.back(), kind, opt));
    candidates.push_back(res.candidates.back().policy);
  }
  std::vector<const CommonGame*> ptrs;
  for (const auto& m : models) ptrs.push_back(&m);
  LearnConfig sel = config;
  sel.seed = Rng::Mix(config.seed, 104729);
  SelectionResult s =
      policy_selection(ptrs, candidates, kind, sel, sampler, shape);
  res.selected = s.index;
  res.selection_score = s.score;
  res.policy = candidates[s.index];
  return res;
}

double underexplored_mass(const PosgModel& model, const GeneralPolicy& policy,
                          int h, double phi) {
  Vec d = state_occupancy(model, policy, h);
  double mass = 0.0;
  for (Eigen::Index s = 0; s < d.size(); ++s) {
    if (d[s] < phi) mass += d[s];
  }
  return mass;
}

}  // namespace posgci
