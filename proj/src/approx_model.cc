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

#include "posgci/approx_model.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "posgci/enumerate.h"

namespace posgci {

ApproxCommonModel::ApproxCommonModel(PosgModel model, SharingPattern pattern,
                                     CompressionScheme scheme,
                                     BeliefSource source,
                                     std::vector<Vec> priors,
                                     std::optional<std::vector<Mat>> rewards,
                                     std::int64_t budget)
    : CommonGame(std::move(model), pattern,
                 source == BeliefSource::kExact ? 0 : scheme.memory),
      source_(source),
      priors_(std::move(priors)) {
  if (source_ == BeliefSource::kExact) {
    memory_ = exact_memory(pattern_, horizon());
  }
  if (source_ == BeliefSource::kOccupancyPrior &&
      static_cast<int>(priors_.size()) < horizon()) {
    throw ConfigError("occupancy prior needs one state distribution per step");
  }
  if (rewards) {
    if (rewards->size() != rewards_.size()) {
      throw ConfigError("reward estimate has the wrong number of steps");
    }
    rewards_ = std::move(*rewards);
  }
  Build(budget);
}

ApproxCommonModel ApproxCommonModel::Exact(PosgModel model,
                                           SharingPattern pattern,
                                           std::int64_t budget) {
  return ApproxCommonModel(std::move(model), pattern, CompressionScheme{},
                           BeliefSource::kExact, {}, std::nullopt, budget);
}

Mat ApproxCommonModel::belief(int h, const InfoKey& key) const {
  if (source_ == BeliefSource::kExact) {
    return exact_common_belief(pattern_, model_, key, h);
  }
  const int start = window_start(pattern_, memory_, h);
  Vec prior;
  if (start < 1) {
    prior = model_.initial;  // unused: the filter starts from mu_1
  } else if (source_ == BeliefSource::kUniformPrior) {
    prior = Vec::Constant(model_.num_states, 1.0 / model_.num_states);
  } else {
    prior = priors_[start - 1];
  }
  return approx_common_belief(pattern_, CompressionScheme{memory_}, model_,
                              key, h, prior);
}

Mat ApproxCommonModel::compute_predictive(int h, const InfoKey& key) const {
  Mat mu = belief(h, key);
  const int A = joint_actions();
  Mat joint(mu.cols() * A, joint_obs());
  for (int a = 0; a < A; ++a) {
    Mat block = mu.transpose() * push(h, a);  // P x O
    for (Eigen::Index p = 0; p < mu.cols(); ++p) {
      joint.row(p * A + a) = block.row(p);
    }
  }
  return joint;
}

ApproxCommonModel build_consistent_model(
    const PosgModel& model, const SharingPattern& pattern,
    const CompressionScheme& scheme, BeliefSource source,
    std::vector<Vec> priors, std::optional<std::vector<Mat>> rewards) {
  return ApproxCommonModel(model, pattern, scheme, source, std::move(priors),
                           std::move(rewards));
}

std::vector<Vec> occupancy_priors(const PosgModel& model,
                                  const GeneralPolicy& policy) {
  std::vector<Vec> out(model.horizon, Vec::Zero(model.num_states));
  for_each_history(model, policy, model.horizon,
                   [&](int h, const History&, const Vec& alpha) {
                     out[h - 1] += alpha;
                     return true;
                   });
  return out;
}

StepDistribution model_step(const CommonGame& game, int h, const InfoKey& key,
                            const PrescriptionProfile& profile) {
  const PrivateSpace& ps = game.private_space(h);
  Mat w = profile_weights(ps.counts, game.model().action_counts,
                          single(profile));
  const int k = game.find_key(h, key);
  if (k >= 0) return step_distribution(game, h, game.predictive(h, k), w);
  return step_distribution(game, h, game.compute_predictive(h, key), w);
}

InfoKey evolve_common(const CommonGame& game, int h, const InfoKey& key,
                      const InfoKey& increment) {
  if (game.find_key(h, key) < 0) {
    throw ReachabilityError("evolve_common: key " + key_to_string(key) +
                            " is not reachable at h=" + std::to_string(h));
  }
  InfoKey next =
      evolve_compressed(game.pattern(), game.memory(), h, key, increment);
  if (h >= game.horizon() || game.find_key(h + 1, next) < 0) {
    throw ReachabilityError("evolve_common: (" + key_to_string(key) + ", " +
                            key_to_string(increment) +
                            ") leaves the reachable set at h=" +
                            std::to_string(h));
  }
  return next;
}

namespace {

// Per exact key: max over prescriptions of the reward and increment
// prediction errors of `m` against the exact game.
class KeyErrors {
 public:
  KeyErrors(const ApproxCommonModel& truth, const CommonGame& m,
            const ErrorOptions& opt)
      : truth_(truth), m_(m), opt_(opt), cache_(truth.horizon()) {}

  bool vertices_complete() const { return complete_; }

  // Entries 0..n-1: reward error per agent; entry n: increment error.
  const Vec& at(int h, int k) {
    auto& c = cache_[h - 1];
    auto it = c.find(k);
    if (it != c.end()) return it->second;
    return c.emplace(k, Compute(h, k)).first->second;
  }

 private:
  Vec Compute(int h, int k) {
    const int n = truth_.num_agents();
    const int A = truth_.joint_actions(), O = truth_.joint_obs();
    const PrivateSpace& ps = truth_.private_space(h);
    const int P = ps.joint, Z = truth_.num_increments(h);
    const Mat& jg = truth_.predictive(h, k);
    InfoKey hat = compress(truth_.pattern(), h, truth_.key(h, k),
                           truth_.memory(), m_.memory());
    const int mk = m_.find_key(h, hat);
    Mat jm = mk >= 0 ? m_.predictive(h, mk) : m_.compute_predictive(h, hat);
    // Differences per (p, a): reward per agent, increment per z.
    std::vector<Mat> dr(n, Mat::Zero(P, A));
    Mat dz = Mat::Zero(P * A, Z);
    for (int p = 0; p < P; ++p) {
      for (int a = 0; a < A; ++a) {
        for (int o = 0; o < O; ++o) {
          const double g = jg(p * A + a, o), mm = jm(p * A + a, o);
          if (g == 0.0 && mm == 0.0) continue;
          for (int i = 0; i < n; ++i) {
            dr[i](p, a) +=
                g * truth_.reward(i, h + 1, o) - mm * m_.reward(i, h + 1, o);
          }
          dz(p * A + a, truth_.increment_index(h, p, a, o)) += g - mm;
        }
      }
    }
    Vec best = Vec::Zero(n + 1);
    auto score = [&](const Mat& w) {
      for (int i = 0; i < n; ++i) {
        best[i] = std::max(best[i], std::abs(w.cwiseProduct(dr[i]).sum()));
      }
      Vec zr = Vec::Zero(Z);
      for (int p = 0; p < P; ++p) {
        for (int a = 0; a < A; ++a) {
          if (w(p, a) != 0.0) zr += w(p, a) * dz.row(p * A + a).transpose();
        }
      }
      best[n] = std::max(best[n], zr.cwiseAbs().sum());
    };
    // Deterministic vertices: one action per (agent, private info).
    const auto& ac = truth_.model().action_counts;
    std::vector<int> digits;  // per (agent, p_i)
    std::vector<int> radix;
    for (int i = 0; i < n; ++i) {
      for (int q = 0; q < ps.counts[i]; ++q) radix.push_back(ac[i]);
    }
    double count = 1.0;
    for (int r : radix) count *= r;
    if (count <= static_cast<double>(opt_.max_vertices)) {
      std::vector<std::vector<int>> pd(P);
      for (int p = 0; p < P; ++p) pd[p] = ps.decode(p);
      std::vector<int> offset(n, 0);
      for (int i = 1; i < n; ++i) offset[i] = offset[i - 1] + ps.counts[i - 1];
      digits.assign(radix.size(), 0);
      Mat w = Mat::Zero(P, A);
      std::vector<int> act(n);
      while (true) {
        w.setZero();
        for (int p = 0; p < P; ++p) {
          for (int i = 0; i < n; ++i) act[i] = digits[offset[i] + pd[p][i]];
          w(p, static_cast<int>(encode_joint(act, ac))) = 1.0;
        }
        score(w);
        size_t d = 0;
        for (; d < radix.size(); ++d) {
          if (++digits[d] < radix[d]) break;
          digits[d] = 0;
        }
        if (d == radix.size()) break;
      }
    } else {
      complete_ = false;
    }
    Rng rng = Rng::Derive(opt_.seed, static_cast<std::uint64_t>(h) * 1000003u +
                                         static_cast<std::uint64_t>(k));
    for (int t = 0; t < opt_.random_prescriptions; ++t) {
      PrescriptionProfile prof;
      for (int i = 0; i < n; ++i) {
        Mat g(ps.counts[i], ac[i]);
        for (int q = 0; q < ps.counts[i]; ++q) {
          g.row(q) = rng.simplex(ac[i]).transpose();
        }
        prof.push_back(std::move(g));
      }
      score(profile_weights(ps.counts, ac, single(std::move(prof))));
    }
    return best;
  }

  const ApproxCommonModel& truth_;
  const CommonGame& m_;
  const ErrorOptions& opt_;
  std::vector<std::map<int, Vec>> cache_;
  bool complete_ = true;
};

// sup over general joint policies of E[e_t(c_t)], for every target t, by a
// max-sum recursion over the history tree. Returned per target t as a
// (n+1)-vector of separately maximized components.
class SupRecursion {
 public:
  SupRecursion(const ApproxCommonModel& truth, KeyErrors& errors,
               std::int64_t budget)
      : truth_(truth), model_(truth.model()), errors_(errors),
        budget_(budget) {}

  std::vector<Vec> Run() {
    History hist;
    return Visit(1, model_.initial, hist);
  }

 private:
  // result[t - h] for targets t = h..H.
  std::vector<Vec> Visit(int h, const Vec& alpha, History& hist) {
    if (++nodes_ > budget_) {
      throw CapacityError("error supremum exceeded node budget", nodes_);
    }
    const int H = model_.horizon;
    const int n = model_.num_agents;
    std::vector<Vec> out(H - h + 1, Vec::Zero(n + 1));
    InfoState st = split_history(truth_.pattern(), model_, hist);
    const int k = truth_.find_key(h, st.common);
    if (k < 0) {
      throw std::logic_error("reachable history maps to an unknown key");
    }
    out[0] = alpha.sum() * errors_.at(h, k);
    if (h == H) return out;
    for (int a = 0; a < model_.num_joint_actions(); ++a) {
      Vec pushed = model_.T(h, a).transpose() * alpha;
      std::vector<Vec> acc(H - h, Vec::Zero(n + 1));
      for (int o = 0; o < model_.num_joint_obs(); ++o) {
        Vec child = pushed.cwiseProduct(model_.O(h + 1).col(o));
        if (child.sum() <= 0.0) continue;
        hist.actions.push_back(a);
        hist.observations.push_back(o);
        std::vector<Vec> sub = Visit(h + 1, child, hist);
        hist.actions.pop_back();
        hist.observations.pop_back();
        for (size_t t = 0; t < sub.size(); ++t) acc[t] += sub[t];
      }
      for (size_t t = 0; t < acc.size(); ++t) {
        out[t + 1] = out[t + 1].cwiseMax(acc[t]);
      }
    }
    return out;
  }

  const ApproxCommonModel& truth_;
  const PosgModel& model_;
  KeyErrors& errors_;
  std::int64_t budget_;
  std::int64_t nodes_ = 0;
};

}  // namespace

ModelErrors measure_model_errors(const PosgModel& model, const CommonGame& m,
                                 const std::vector<GeneralPolicy>& policies,
                                 const ErrorOptions& opt) {
  const int H = model.horizon, n = model.num_agents;
  ApproxCommonModel truth = ApproxCommonModel::Exact(model, m.pattern());
  KeyErrors errors(truth, m, opt);
  ModelErrors out;
  std::vector<Vec> per_step(H, Vec::Zero(n + 1));
  if (policies.empty()) {
    if (opt.mode != ErrorMode::kExact) {
      throw ConfigError(
          "the supremum over general policies needs exact mode; supply "
          "policies for Monte Carlo estimation");
    }
    per_step = SupRecursion(truth, errors, opt.node_budget).Run();
    out.policy_set = "all general policies";
    out.mode = "exact";
  } else {
    out.policy_set = "supplied (" + std::to_string(policies.size()) + ")";
    for (size_t q = 0; q < policies.size(); ++q) {
      std::vector<Vec> acc(H, Vec::Zero(n + 1));
      if (opt.mode == ErrorMode::kExact) {
        for_each_history(
            model, policies[q], H,
            [&](int h, const History& hist, const Vec& alpha) {
              InfoState st = split_history(m.pattern(), model, hist);
              acc[h - 1] += alpha.sum() *
                            errors.at(h, truth.find_key(h, st.common));
              return true;
            },
            opt.node_budget);
      } else {
        auto trajs = sample_batch(model, policies[q],
                                  Rng::Mix(opt.seed, q + 1), opt.samples);
        for (const Trajectory& tr : trajs) {
          for (int h = 1; h <= H; ++h) {
            InfoState st = split_history(m.pattern(), model, tr.prefix(h));
            acc[h - 1] += errors.at(h, truth.find_key(h, st.common));
          }
        }
        for (auto& v : acc) v /= std::max(1, opt.samples);
      }
      for (int h = 0; h < H; ++h) per_step[h] = per_step[h].cwiseMax(acc[h]);
    }
    out.mode = opt.mode == ErrorMode::kExact
                   ? "exact"
                   : "monte_carlo(" + std::to_string(opt.samples) + ")";
  }
  for (int h = 0; h < H; ++h) {
    double r = per_step[h].head(n).maxCoeff();
    out.eps_r_by_step.push_back(r);
    out.eps_z_by_step.push_back(per_step[h][n]);
    out.eps_r = std::max(out.eps_r, r);
    out.eps_z = std::max(out.eps_z, per_step[h][n]);
  }
  out.vertices_complete = errors.vertices_complete();
  return out;
}

}  // namespace posgci
