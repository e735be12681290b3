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

#include "posgci/model.h"

#include <cmath>
#include <sstream>
#include <thread>

namespace posgci {

std::int64_t radix_product(const std::vector<int>& radices) {
  std::int64_t p = 1;
  for (int r : radices) p *= r;
  return p;
}

std::int64_t encode_joint(const std::vector<int>& indices,
                          const std::vector<int>& radices) {
  if (indices.size() != radices.size()) {
    throw std::out_of_range("encode_joint: arity mismatch");
  }
  std::int64_t index = 0;
  for (size_t k = 0; k < indices.size(); ++k) {
    if (indices[k] < 0 || indices[k] >= radices[k]) {
      throw std::out_of_range("encode_joint: digit " + std::to_string(k) +
                              " = " + std::to_string(indices[k]) +
                              " outside radix " + std::to_string(radices[k]));
    }
    index = index * radices[k] + indices[k];
  }
  return index;
}

std::vector<int> decode_joint(std::int64_t index,
                              const std::vector<int>& radices) {
  if (index < 0 || index >= radix_product(radices)) {
    throw std::out_of_range("decode_joint: index " + std::to_string(index) +
                            " out of range");
  }
  std::vector<int> out(radices.size());
  for (int k = static_cast<int>(radices.size()) - 1; k >= 0; --k) {
    out[k] = static_cast<int>(index % radices[k]);
    index /= radices[k];
  }
  return out;
}

int PosgModel::num_joint_actions() const {
  return static_cast<int>(radix_product(action_counts));
}

int PosgModel::num_joint_obs() const {
  return static_cast<int>(radix_product(obs_counts));
}

std::vector<int> PosgModel::split_action(int a) const {
  return decode_joint(a, action_counts);
}
std::vector<int> PosgModel::split_obs(int o) const {
  return decode_joint(o, obs_counts);
}
int PosgModel::join_action(const std::vector<int>& a) const {
  return static_cast<int>(encode_joint(a, action_counts));
}
int PosgModel::join_obs(const std::vector<int>& o) const {
  return static_cast<int>(encode_joint(o, obs_counts));
}

namespace {

std::string Loc(std::initializer_list<std::pair<const char*, int>> parts) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, v] : parts) {
    os << (first ? "" : ", ") << k << "=" << v;
    first = false;
  }
  return os.str();
}

void CheckRow(const Eigen::Ref<const Vec>& row, const std::string& where,
              ValidationReport* report) {
  for (Eigen::Index k = 0; k < row.size(); ++k) {
    if (!(row[k] >= 0.0) || !std::isfinite(row[k])) {
      report->push_back({where, "negative or non-finite entry at column " +
                                    std::to_string(k)});
      return;
    }
  }
  double sum = row.sum();
  if (std::abs(sum - 1.0) > kProbTolerance) {
    std::ostringstream os;
    os << "row sums to " << sum;
    report->push_back({where, os.str()});
  }
}

}  // namespace

ValidationReport validate_model(const PosgModel& m) {
  ValidationReport report;
  auto fail = [&](const std::string& where, const std::string& what) {
    report.push_back({where, what});
  };
  if (m.horizon < 1) fail("model", "horizon must be positive");
  if (m.num_agents < 1) fail("model", "num_agents must be positive");
  if (m.num_states < 1) fail("model", "num_states must be positive");
  if (static_cast<int>(m.action_counts.size()) != m.num_agents ||
      static_cast<int>(m.obs_counts.size()) != m.num_agents) {
    fail("model", "action/observation counts must have one entry per agent");
    return report;
  }
  for (int i = 0; i < m.num_agents; ++i) {
    if (m.action_counts[i] < 1) fail(Loc({{"i", i}}), "action count < 1");
    if (m.obs_counts[i] < 1) fail(Loc({{"i", i}}), "observation count < 1");
  }
  if (!report.empty()) return report;
  const int S = m.num_states, A = m.num_joint_actions(),
            O = m.num_joint_obs(), H = m.horizon, n = m.num_agents;

  if (m.initial.size() != S) {
    fail("initial", "length must equal num_states");
  } else {
    CheckRow(m.initial, "initial", &report);
  }
  if (static_cast<int>(m.transitions.size()) != H) {
    fail("transitions", "need one table per step 1..H");
  } else {
    for (int h = 1; h <= H; ++h) {
      if (static_cast<int>(m.transitions[h - 1].size()) != A) {
        fail(Loc({{"h", h}}), "transition table needs one matrix per joint action");
        continue;
      }
      for (int a = 0; a < A; ++a) {
        const Mat& t = m.transitions[h - 1][a];
        if (t.rows() != S || t.cols() != S) {
          fail(Loc({{"h", h}, {"a", a}}), "transition matrix must be S x S");
          continue;
        }
        for (int s = 0; s < S; ++s) {
          CheckRow(t.row(s).transpose(),
                   "transition " + Loc({{"h", h}, {"s", s}, {"a", a}}),
                   &report);
        }
      }
    }
  }
  if (static_cast<int>(m.emissions.size()) != H + 1) {
    fail("emissions", "need one table per step 1..H+1");
  } else {
    for (int h = 1; h <= H + 1; ++h) {
      const Mat& e = m.emissions[h - 1];
      if (e.rows() != S || e.cols() != O) {
        fail(Loc({{"h", h}}), "emission matrix must be S x O_joint");
        continue;
      }
      for (int s = 0; s < S; ++s) {
        CheckRow(e.row(s).transpose(), "emission " + Loc({{"h", h}, {"s", s}}),
                 &report);
      }
    }
  }
  if (static_cast<int>(m.rewards.size()) != H) {
    fail("rewards", "need one table per step 2..H+1");
  } else {
    for (int h = 2; h <= H + 1; ++h) {
      const Mat& r = m.rewards[h - 2];
      if (r.rows() != O || r.cols() != n) {
        fail(Loc({{"h", h}}), "reward table must be O_joint x n");
        continue;
      }
      for (int i = 0; i < n; ++i) {
        for (int o = 0; o < O; ++o) {
          double v = r(o, i);
          if (!(v >= 0.0 && v <= 1.0)) {
            std::ostringstream os;
            os << "reward " << v << " outside [0,1]";
            fail("reward " + Loc({{"i", i}, {"h", h}, {"o", o}}), os.str());
          }
        }
      }
    }
  }
  return report;
}

void require_valid(const PosgModel& model) {
  ValidationReport report = validate_model(model);
  if (report.empty()) return;
  std::ostringstream os;
  os << "invalid model '" << model.name << "': " << report.size()
     << " violation(s)";
  for (size_t k = 0; k < report.size() && k < 5; ++k) {
    os << "; " << report[k].location << ": " << report[k].message;
  }
  throw ModelError(os.str());
}

History Trajectory::prefix(int h) const {
  History hist;
  hist.actions.assign(actions.begin(), actions.begin() + (h - 1));
  hist.observations.assign(observations.begin(),
                           observations.begin() + (h - 1));
  return hist;
}

double Trajectory::return_of(int i) const {
  double total = 0.0;
  for (const auto& step : rewards) total += step[i];
  return total;
}

GeneralPolicy GeneralPolicy::Uniform(int num_joint_actions) {
  Vec u = Vec::Constant(num_joint_actions, 1.0 / num_joint_actions);
  return GeneralPolicy([u](int, const History&) { return u; });
}

GeneralPolicy GeneralPolicy::FixedAction(int num_joint_actions,
                                         int joint_action) {
  Vec d = Vec::Zero(num_joint_actions);
  d[joint_action] = 1.0;
  return GeneralPolicy([d](int, const History&) { return d; });
}

GeneralPolicy GeneralPolicy::Table(int num_joint_actions,
                                   std::map<History, Vec> table) {
  Vec u = Vec::Constant(num_joint_actions, 1.0 / num_joint_actions);
  auto shared = std::make_shared<const std::map<History, Vec>>(std::move(table));
  return GeneralPolicy([shared, u](int, const History& hist) {
    auto it = shared->find(hist);
    return it == shared->end() ? u : it->second;
  });
}

std::uint64_t Rng::Mix(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finalizer applied twice.
  auto splitmix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return splitmix(splitmix(seed) ^ (stream * 0xd1342543de82ef95ULL + 1));
}

Rng::Rng(std::uint64_t seed) : engine_(Mix(seed, 0)) {}

Rng Rng::Derive(std::uint64_t seed, std::uint64_t stream) {
  return Rng(Mix(seed, stream + 1));
}

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

int Rng::categorical(const Vec& probs) {
  double u = uniform();
  double acc = 0.0;
  int last_positive = -1;
  for (Eigen::Index k = 0; k < probs.size(); ++k) {
    if (probs[k] <= 0.0) continue;
    acc += probs[k];
    last_positive = static_cast<int>(k);
    if (u < acc) return last_positive;
  }
  if (last_positive < 0) throw Error("categorical: no positive mass");
  return last_positive;
}

Vec Rng::simplex(int n) {
  Vec v(n);
  for (int k = 0; k < n; ++k) v[k] = -std::log(1.0 - uniform());
  return v / v.sum();
}

namespace {

Trajectory SampleUnchecked(const PosgModel& model, const GeneralPolicy& policy,
                           std::uint64_t seed) {
  Rng rng(seed);
  const int H = model.horizon;
  Trajectory traj;
  traj.seed = seed;
  traj.states.reserve(H + 1);
  int s = rng.categorical(model.initial);
  traj.states.push_back(s);
  History hist;
  for (int h = 1; h <= H; ++h) {
    Vec pi = policy(h, hist);
    int a = rng.categorical(pi);
    int s_next = rng.categorical(model.T(h, a).row(s).transpose());
    int o = rng.categorical(model.O(h + 1).row(s_next).transpose());
    traj.actions.push_back(a);
    traj.observations.push_back(o);
    traj.states.push_back(s_next);
    std::vector<double> r(model.num_agents);
    for (int i = 0; i < model.num_agents; ++i) r[i] = model.r(i, h + 1, o);
    traj.rewards.push_back(std::move(r));
    hist.actions.push_back(a);
    hist.observations.push_back(o);
    s = s_next;
  }
  return traj;
}

}  // namespace

Trajectory sample_trajectory(const PosgModel& model,
                             const GeneralPolicy& policy, std::uint64_t seed) {
  require_valid(model);
  return SampleUnchecked(model, policy, seed);
}

std::vector<Trajectory> sample_batch(const PosgModel& model,
                                     const GeneralPolicy& policy,
                                     std::uint64_t seed, int count,
                                     int threads) {
  require_valid(model);
  std::vector<Trajectory> out(count);
  auto work = [&](int begin, int end) {
    for (int k = begin; k < end; ++k) {
      out[k] = SampleUnchecked(model, policy, Rng::Mix(seed, k + 1));
    }
  };
  threads = std::max(1, std::min(threads, count));
  if (threads == 1) {
    work(0, count);
    return out;
  }
  std::vector<std::thread> pool;
  int chunk = (count + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    int b = t * chunk, e = std::min(count, b + chunk);
    if (b < e) pool.emplace_back(work, b, e);
  }
  for (auto& th : pool) th.join();
  return out;
}

}  // namespace posgci
