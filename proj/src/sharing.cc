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

#include "posgci/sharing.h"

#include <algorithm>
#include <cassert>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "posgci/belief.h"
#include "posgci/enumerate.h"

namespace posgci {

SharingPattern SharingPattern::UncontrolledDelay(int d) {
  if (d < 1) throw ConfigError("UncontrolledDelay needs d >= 1");
  return {PatternKind::kUncontrolledDelay, d};
}

SharingPattern SharingPattern::AsymmetricControllerDelay(int d, bool case_a) {
  if (!case_a) {
    throw ConfigError(
        "AsymmetricControllerDelay: only the case where agent 1 does not "
        "affect transitions is supported (no belief formula for the other)");
  }
  if (d < 1) throw ConfigError("AsymmetricControllerDelay needs d >= 1");
  return {PatternKind::kAsymmetricControllerDelay, d};
}

SharingPattern SharingPattern::FromName(const std::string& name, int d) {
  if (name == "one_step_delay") return OneStepDelay();
  if (name == "symmetric") return Symmetric();
  if (name == "one_directional") return OneDirectional();
  if (name == "uncontrolled_delay") return UncontrolledDelay(d);
  if (name == "asymmetric_controller_delay") {
    return AsymmetricControllerDelay(d);
  }
  throw ConfigError("unknown sharing pattern '" + name + "'");
}

std::string SharingPattern::name() const {
  switch (kind) {
    case PatternKind::kOneStepDelay: return "one_step_delay";
    case PatternKind::kSymmetric: return "symmetric";
    case PatternKind::kOneDirectional: return "one_directional";
    case PatternKind::kUncontrolledDelay: return "uncontrolled_delay";
    case PatternKind::kAsymmetricControllerDelay:
      return "asymmetric_controller_delay";
  }
  return "?";
}

void SharingPattern::check_model(const PosgModel& model) const {
  const int A = model.num_joint_actions();
  if ((kind == PatternKind::kOneDirectional ||
       kind == PatternKind::kAsymmetricControllerDelay) &&
      model.num_agents != 2) {
    throw ModelError(name() + " requires exactly two agents");
  }
  for (int h = 1; h <= model.horizon; ++h) {
    for (int a = 0; a < A; ++a) {
      int ref = -1;
      if (kind == PatternKind::kUncontrolledDelay) {
        ref = 0;
      } else if (kind == PatternKind::kAsymmetricControllerDelay) {
        ref = model.join_action({model.split_action(a)[0], 0});
      }
      if (ref < 0) continue;
      double diff = (model.T(h, a) - model.T(h, ref)).cwiseAbs().maxCoeff();
      if (diff > kProbTolerance) {
        throw ModelError(name() + ": transitions at h=" + std::to_string(h) +
                         " depend on an action that must not matter (a=" +
                         std::to_string(a) + ")");
      }
    }
  }
}

std::string key_to_string(const InfoKey& key) {
  std::ostringstream os;
  os << "[";
  for (size_t k = 0; k < key.size(); ++k) os << (k ? " " : "") << key[k];
  os << "]";
  return os.str();
}

namespace {

Item JA(int t) { return {ItemKind::kJointAction, -1, t}; }
Item AA(int j, int t) { return {ItemKind::kAgentAction, j, t}; }
Item JO(int t) { return {ItemKind::kJointObs, -1, t}; }
Item AO(int j, int t) { return {ItemKind::kAgentObs, j, t}; }

bool IsObs(const Item& it) {
  return it.kind == ItemKind::kJointObs || it.kind == ItemKind::kAgentObs;
}

}  // namespace

std::vector<Item> increment_items(const SharingPattern& p, int h) {
  const int d = p.delay;
  switch (p.kind) {
    case PatternKind::kOneStepDelay:
      if (h >= 2) return {JO(h), JA(h)};
      return {JA(h)};
    case PatternKind::kSymmetric:
      return {JA(h), JO(h + 1)};
    case PatternKind::kOneDirectional:
      if (h >= 2) return {AO(1, h), JA(h), AO(0, h + 1)};
      return {JA(h), AO(0, h + 1)};
    case PatternKind::kUncontrolledDelay:
      if (h - d + 1 >= 2) return {JO(h - d + 1)};
      return {};
    case PatternKind::kAsymmetricControllerDelay: {
      std::vector<Item> z = {AO(0, h + 1)};
      if (h - d + 1 >= 2) z.push_back(AO(1, h - d + 1));
      z.push_back(AA(0, h));
      return z;
    }
  }
  return {};
}

std::vector<Item> common_items(const SharingPattern& p, int h) {
  std::vector<Item> out;
  for (int t = 1; t < h; ++t) {
    auto z = increment_items(p, t);
    out.insert(out.end(), z.begin(), z.end());
  }
  return out;
}

std::vector<Item> private_items(const SharingPattern& p, int h, int agent) {
  std::vector<Item> out;
  switch (p.kind) {
    case PatternKind::kOneStepDelay:
      if (h >= 2) out.push_back(AO(agent, h));
      break;
    case PatternKind::kSymmetric:
      break;
    case PatternKind::kOneDirectional:
      if (agent == 1 && h >= 2) out.push_back(AO(1, h));
      break;
    case PatternKind::kUncontrolledDelay:
      for (int t = std::max(2, h - p.delay + 1); t <= h; ++t) {
        out.push_back(AO(agent, t));
      }
      break;
    case PatternKind::kAsymmetricControllerDelay:
      if (agent == 1) {
        for (int t = std::max(2, h - p.delay + 1); t <= h; ++t) {
          out.push_back(AO(1, t));
        }
      }
      break;
  }
  return out;
}

bool keeps_item(const SharingPattern& p, int L, int h, const Item& it) {
  const int t = it.time;
  switch (p.kind) {
    case PatternKind::kOneStepDelay:
    case PatternKind::kSymmetric:
      return IsObs(it) ? t >= h - L + 1 : t >= h - L;
    case PatternKind::kOneDirectional:
      if (!IsObs(it)) return t >= h - L;
      if (it.kind == ItemKind::kAgentObs && it.agent == 0) {
        return t >= std::min(h, h - L + 1);
      }
      return t >= h - L + 1;
    case PatternKind::kUncontrolledDelay:
      return t >= h - p.delay - L + 1;
    case PatternKind::kAsymmetricControllerDelay:
      return IsObs(it) ? t >= h - p.delay - L + 1 : t >= h - p.delay - L;
  }
  return true;
}

std::vector<Item> compressed_items(const SharingPattern& p, int L, int h) {
  std::vector<Item> out;
  for (const Item& it : common_items(p, h)) {
    if (keeps_item(p, L, h, it)) out.push_back(it);
  }
  return out;
}

int item_radix(const PosgModel& m, const Item& it) {
  switch (it.kind) {
    case ItemKind::kJointAction: return m.num_joint_actions();
    case ItemKind::kAgentAction: return m.action_counts[it.agent];
    case ItemKind::kJointObs: return m.num_joint_obs();
    case ItemKind::kAgentObs: return m.obs_counts[it.agent];
  }
  return 0;
}

int item_value(const PosgModel& m, const Item& it, const History& hist) {
  switch (it.kind) {
    case ItemKind::kJointAction: return hist.a(it.time);
    case ItemKind::kAgentAction:
      return m.split_action(hist.a(it.time))[it.agent];
    case ItemKind::kJointObs: return hist.o(it.time);
    case ItemKind::kAgentObs: return m.split_obs(hist.o(it.time))[it.agent];
  }
  return 0;
}

PrivateSpace private_space(const SharingPattern& p, const PosgModel& m,
                           int h) {
  PrivateSpace ps;
  for (int i = 0; i < m.num_agents; ++i) {
    int c = 1;
    for (const Item& it : private_items(p, h, i)) c *= item_radix(m, it);
    ps.counts.push_back(c);
  }
  ps.joint = static_cast<int>(radix_product(ps.counts));
  return ps;
}

namespace {

std::vector<int> Radices(const PosgModel& m, const std::vector<Item>& items) {
  std::vector<int> r;
  for (const Item& it : items) r.push_back(item_radix(m, it));
  return r;
}

// Lookup of item values by (kind, agent, time).
class KeyView {
 public:
  KeyView(const PosgModel& m, const std::vector<Item>& items,
          const InfoKey& key)
      : m_(m) {
    if (items.size() != key.size()) {
      throw std::invalid_argument("common information key has length " +
                                  std::to_string(key.size()) + ", layout " +
                                  std::to_string(items.size()));
    }
    for (size_t k = 0; k < items.size(); ++k) {
      values_[{static_cast<int>(items[k].kind), items[k].agent,
               items[k].time}] = key[k];
    }
  }

  int joint_action(int t) const {
    if (auto v = Find(ItemKind::kJointAction, -1, t)) return *v;
    // Only agent 0's action is known; the remaining agents do not affect
    // the transition kernel for the patterns that use this path.
    if (auto v = Find(ItemKind::kAgentAction, 0, t)) {
      std::vector<int> a(m_.num_agents, 0);
      a[0] = *v;
      return m_.join_action(a);
    }
    throw std::logic_error("action at step " + std::to_string(t) +
                           " not present in key");
  }

  int joint_obs(int t) const {
    if (auto v = Find(ItemKind::kJointObs, -1, t)) return *v;
    std::vector<int> o(m_.num_agents);
    for (int j = 0; j < m_.num_agents; ++j) o[j] = agent_obs(j, t);
    return m_.join_obs(o);
  }

  int agent_obs(int j, int t) const {
    if (auto v = Find(ItemKind::kAgentObs, j, t)) return *v;
    if (auto v = Find(ItemKind::kJointObs, -1, t)) return m_.split_obs(*v)[j];
    throw std::logic_error("observation of agent " + std::to_string(j) +
                           " at step " + std::to_string(t) +
                           " not present in key");
  }

 private:
  std::optional<int> Find(ItemKind k, int agent, int t) const {
    auto it = values_.find({static_cast<int>(k), agent, t});
    if (it == values_.end()) return std::nullopt;
    return it->second;
  }

  const PosgModel& m_;
  std::map<std::tuple<int, int, int>, int> values_;
};

}  // namespace

InfoState split_history(const SharingPattern& p, const PosgModel& m,
                        const History& hist) {
  const int h = hist.step();
  InfoState st;
  for (const Item& it : common_items(p, h)) {
    st.common.push_back(item_value(m, it, hist));
  }
  for (int i = 0; i < m.num_agents; ++i) {
    auto items = private_items(p, h, i);
    std::vector<int> vals;
    for (const Item& it : items) vals.push_back(item_value(m, it, hist));
    st.priv.push_back(static_cast<int>(encode_joint(vals, Radices(m, items))));
  }
  return st;
}

Evolution evolve_information(const SharingPattern& p, const PosgModel& m,
                             int h, const std::vector<int>& priv, int a,
                             int o_next) {
  std::map<std::pair<int, int>, int> obs;  // (agent, time) -> o_{agent,time}
  for (int i = 0; i < m.num_agents; ++i) {
    auto items = private_items(p, h, i);
    auto vals = decode_joint(priv[i], Radices(m, items));
    for (size_t k = 0; k < items.size(); ++k) {
      obs[{items[k].agent, items[k].time}] = vals[k];
    }
  }
  auto agent_obs = [&](int j, int t) {
    if (t == h + 1) return m.split_obs(o_next)[j];
    auto it = obs.find({j, t});
    if (it == obs.end()) {
      throw std::logic_error("evolve_information: o_{" + std::to_string(j) +
                             "," + std::to_string(t) + "} unavailable");
    }
    return it->second;
  };
  auto resolve = [&](const Item& it) -> int {
    switch (it.kind) {
      case ItemKind::kJointAction: return a;
      case ItemKind::kAgentAction: return m.split_action(a)[it.agent];
      case ItemKind::kAgentObs: return agent_obs(it.agent, it.time);
      case ItemKind::kJointObs: {
        if (it.time == h + 1) return o_next;
        std::vector<int> o(m.num_agents);
        for (int j = 0; j < m.num_agents; ++j) o[j] = agent_obs(j, it.time);
        return m.join_obs(o);
      }
    }
    return 0;
  };
  Evolution ev;
  for (const Item& it : increment_items(p, h)) ev.increment.push_back(resolve(it));
  for (int i = 0; i < m.num_agents; ++i) {
    auto items = private_items(p, h + 1, i);
    std::vector<int> vals;
    for (const Item& it : items) vals.push_back(resolve(it));
    ev.priv.push_back(static_cast<int>(encode_joint(vals, Radices(m, items))));
  }
  return ev;
}

InfoKey compress(const SharingPattern& p, int h, const InfoKey& key,
                 int memory_from, int memory_to) {
  auto items = compressed_items(p, memory_from, h);
  if (items.size() != key.size()) {
    throw std::invalid_argument("compress: key length does not match layout");
  }
  InfoKey out;
  for (size_t k = 0; k < items.size(); ++k) {
    if (keeps_item(p, memory_to, h, items[k])) out.push_back(key[k]);
  }
  return out;
}

InfoKey compress(const SharingPattern& p, const CompressionScheme& scheme,
                 int h, const InfoKey& exact) {
  return compress(p, h, exact, h + p.delay + 1, scheme.memory);
}

InfoKey evolve_compressed(const SharingPattern& p, int L, int h,
                          const InfoKey& key, const InfoKey& increment) {
  auto items = compressed_items(p, L, h);
  auto z_items = increment_items(p, h);
  if (items.size() != key.size() || z_items.size() != increment.size()) {
    throw ReachabilityError("evolve_compressed: malformed (key, z) at h=" +
                            std::to_string(h));
  }
  InfoKey out;
  for (size_t k = 0; k < items.size(); ++k) {
    if (keeps_item(p, L, h + 1, items[k])) out.push_back(key[k]);
  }
  for (size_t k = 0; k < z_items.size(); ++k) {
    if (keeps_item(p, L, h + 1, z_items[k])) out.push_back(increment[k]);
  }
  return out;
}

int hat_memory(const SharingPattern& p, const CompressionScheme& scheme) {
  return p.uses_delay() ? scheme.memory + p.delay : scheme.memory;
}

int window_start(const SharingPattern& p, int L, int h) {
  return p.uses_delay() ? h - p.delay - L : h - L;
}

CompressionStats compression_stats(const SharingPattern& p,
                                   const CompressionScheme& scheme,
                                   const PosgModel& m) {
  const int H = m.horizon;
  std::vector<std::set<InfoKey>> exact(H + 2), compressed(H + 2), incr(H + 2);
  std::vector<std::set<std::vector<int>>> priv(H + 2);
  for_each_history(
      m, GeneralPolicy::Uniform(m.num_joint_actions()), H + 1,
      [&](int h, const History& hist, const Vec&) {
        InfoState st = split_history(p, m, hist);
        if (h <= H) {
          exact[h].insert(st.common);
          compressed[h].insert(compress(p, scheme, h, st.common));
          priv[h].insert(st.priv);
        }
        if (h >= 2) {
          InfoKey z;
          for (const Item& it : increment_items(p, h - 1)) {
            z.push_back(item_value(m, it, hist));
          }
          incr[h - 1].insert(z);
        }
        return true;
      });
  CompressionStats stats;
  stats.hat_memory = hat_memory(p, scheme);
  for (int h = 1; h <= H; ++h) {
    stats.common_counts.push_back(static_cast<int>(exact[h].size()));
    stats.compressed_counts.push_back(static_cast<int>(compressed[h].size()));
    stats.private_counts.push_back(static_cast<int>(priv[h].size()));
    stats.increment_counts.push_back(static_cast<int>(incr[h].size()));
  }
  return stats;
}

namespace {

// Which filter runs underneath the closed forms.
struct FilterChoice {
  bool exact = true;
  int memory = 0;
  const Vec* prior = nullptr;
};

// Belief at step `target` from key values; the window starts at `k` for the
// finite-memory filter.
template <typename ActionFn, typename ObsFn>
Vec RunChosenFilter(const PosgModel& m, const FilterChoice& fc, int target,
                    int k, ActionFn action, ObsFn obs, FilterMode mode,
                    int own_obs = -1) {
  const int start = fc.exact ? 1 : std::max(1, k);
  std::vector<int> acts, obss;
  for (int t = start; t < target; ++t) acts.push_back(action(t));
  const int last_obs = mode == FilterMode::kPostObs ? target : target - 1;
  for (int t = start + 1; t <= last_obs; ++t) obss.push_back(obs(t));
  if (fc.exact) return exact_filter(m, acts, obss, mode, 0, own_obs);
  return approx_filter(m, target, start, acts, obss, *fc.prior, mode, 0,
                       own_obs);
}

Mat CommonBelief(const SharingPattern& p, const PosgModel& m,
                 const KeyView& view, int h, const FilterChoice& fc) {
  const int S = m.num_states;
  const int L = fc.memory;
  auto ja = [&](int t) { return view.joint_action(t); };
  auto jo = [&](int t) { return view.joint_obs(t); };
  switch (p.kind) {
    case PatternKind::kOneStepDelay: {
      if (h == 1) return m.initial;
      Vec b = RunChosenFilter(m, fc, h, h - L, ja, jo, FilterMode::kPreObs);
      return b.asDiagonal() * m.O(h);
    }
    case PatternKind::kSymmetric:
      return RunChosenFilter(m, fc, h, h - L, ja, jo, FilterMode::kPostObs);
    case PatternKind::kOneDirectional: {
      if (h == 1) return m.initial;
      const int o1 = view.agent_obs(0, h);
      Vec b = RunChosenFilter(m, fc, h, h - L, ja, jo, FilterMode::kIndividual,
                              o1);
      const int O2 = m.obs_counts[1];
      Mat out(S, O2);
      for (int s = 0; s < S; ++s) {
        double den = 0.0;
        for (int o2 = 0; o2 < O2; ++o2) den += m.O(h)(s, m.join_obs({o1, o2}));
        for (int o2 = 0; o2 < O2; ++o2) {
          if (den > 0.0) {
            out(s, o2) = b[s] * m.O(h)(s, m.join_obs({o1, o2})) / den;
          } else {
            assert(b[s] == 0.0);
            out(s, o2) = b[s] / O2;
          }
        }
      }
      return out;
    }
    case PatternKind::kUncontrolledDelay: {
      const int anchor_step = std::max(1, h - p.delay);
      Vec anchor = m.initial;
      if (h - p.delay > 1) {
        anchor = RunChosenFilter(
            m, fc, anchor_step, anchor_step - L, [](int) { return 0; }, jo,
            FilterMode::kPostObs);
      }
      // Forward the joint (state, private observation stream).
      const int O = m.num_joint_obs();
      Mat alpha = anchor;
      for (int t = anchor_step + 1; t <= h; ++t) {
        Mat next(S, alpha.cols() * O);
        for (Eigen::Index k = 0; k < alpha.cols(); ++k) {
          Vec v = m.T(t - 1, 0).transpose() * alpha.col(k);
          for (int o = 0; o < O; ++o) {
            next.col(k * O + o) = v.cwiseProduct(m.O(t).col(o));
          }
        }
        alpha = std::move(next);
      }
      const int len = h - anchor_step;
      PrivateSpace ps = private_space(p, m, h);
      Mat out = Mat::Zero(S, ps.joint);
      std::vector<int> seq_radix(len, O);
      for (Eigen::Index k = 0; k < alpha.cols(); ++k) {
        auto seq = decode_joint(k, seq_radix);
        std::vector<int> per_agent(m.num_agents);
        for (int i = 0; i < m.num_agents; ++i) {
          std::vector<int> own(len), radix(len, m.obs_counts[i]);
          for (int t = 0; t < len; ++t) own[t] = m.split_obs(seq[t])[i];
          per_agent[i] = static_cast<int>(encode_joint(own, radix));
        }
        out.col(ps.encode(per_agent)) += alpha.col(k);
      }
      return out;
    }
    case PatternKind::kAsymmetricControllerDelay: {
      const int anchor_step = std::max(1, h - p.delay);
      Vec anchor = m.initial;
      if (h - p.delay > 1) {
        anchor = RunChosenFilter(m, fc, anchor_step, anchor_step - L, ja, jo,
                                 FilterMode::kPostObs);
      }
      const int O2 = m.obs_counts[1];
      // For each anchor state: P(s_h, p_h, f_o | s_anchor, f_a).
      std::vector<Mat> forward(S);
      Vec likelihood(S);
      for (int s0 = 0; s0 < S; ++s0) {
        Mat alpha = Mat::Zero(S, 1);
        alpha(s0, 0) = 1.0;
        for (int t = anchor_step + 1; t <= h; ++t) {
          const int a = view.joint_action(t - 1);
          const int o1 = view.agent_obs(0, t);
          Mat next(S, alpha.cols() * O2);
          for (Eigen::Index k = 0; k < alpha.cols(); ++k) {
            Vec v = m.T(t - 1, a).transpose() * alpha.col(k);
            for (int o2 = 0; o2 < O2; ++o2) {
              next.col(k * O2 + o2) =
                  v.cwiseProduct(m.O(t).col(m.join_obs({o1, o2})));
            }
          }
          alpha = std::move(next);
        }
        likelihood[s0] = alpha.sum();
        forward[s0] = std::move(alpha);
      }
      // F^{P(.|.,f_a)}(b_{h-d}; f_o) then push through the forward kernel.
      Vec post = posterior_update<double>(anchor, Mat(likelihood), 0);
      Mat out = Mat::Zero(S, forward[0].cols());
      for (int s0 = 0; s0 < S; ++s0) {
        if (post[s0] > 0.0) out += post[s0] / likelihood[s0] * forward[s0];
      }
      return out;
    }
  }
  return Mat();
}

}  // namespace

Mat exact_common_belief(const SharingPattern& p, const PosgModel& m,
                        const InfoKey& common, int h) {
  KeyView view(m, common_items(p, h), common);
  FilterChoice fc;
  fc.exact = true;
  return CommonBelief(p, m, view, h, fc);
}

Mat approx_common_belief(const SharingPattern& p,
                         const CompressionScheme& scheme, const PosgModel& m,
                         const InfoKey& key, int h, const Vec& prior) {
  KeyView view(m, compressed_items(p, scheme.memory, h), key);
  FilterChoice fc;
  fc.exact = false;
  fc.memory = scheme.memory;
  fc.prior = &prior;
  return CommonBelief(p, m, view, h, fc);
}

}  // namespace posgci
