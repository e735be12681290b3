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

#include <cmath>
#include <map>
#include <set>
#include <vector>

#include "doctest.h"
#include "fixtures.h"
#include "posgci/approx_model.h"
#include "posgci/bench.h"
#include "posgci/enumerate.h"
#include "posgci/planning.h"

namespace posgci {
namespace {

MixedProfile Pure(int a0, int a1) {
  Mat x = Mat::Zero(1, 2), y = Mat::Zero(1, 2);
  x(0, a0) = 1;
  y(0, a1) = 1;
  return single({x, y});
}

// One-shot matching pennies, both agents fixed.
CommonInfoPolicy PurePennies(int a0, int a1) {
  CommonInfoPolicy pol;
  pol.pattern = SharingPattern::OneStepDelay();
  pol.horizon = 1;
  pol.memory = exact_memory(pol.pattern, 1);
  pol.action_counts = {2, 2};
  pol.table.resize(1);
  pol.table[0][{}] = Pure(a0, a1);
  return pol;
}

// Best deterministic decentralized team value for Dec-Tiger H = 2: agent
// i picks a_{i,1} and a map from its own o_{i,2} to a_{i,2}.
double DecTigerTeamOptimum(const PosgModel& m) {
  double best = -1e300;
  for (int a1 = 0; a1 < 9; ++a1) {
    std::vector<std::set<int>> seen(2);
    for_each_history(m, GeneralPolicy::FixedAction(9, a1), 2,
                     [&](int h, const History& hist, const Vec&) {
                       if (h == 2) {
                         auto od = m.split_obs(hist.o(2));
                         seen[0].insert(od[0]);
                         seen[1].insert(od[1]);
                       }
                       return true;
                     });
    std::vector<std::vector<int>> obs(2);
    for (int i = 0; i < 2; ++i) obs[i].assign(seen[i].begin(), seen[i].end());
    const int n0 = static_cast<int>(std::pow(3, obs[0].size()));
    const int n1 = static_cast<int>(std::pow(3, obs[1].size()));
    for (int f0 = 0; f0 < n0; ++f0) {
      for (int f1 = 0; f1 < n1; ++f1) {
        std::vector<std::map<int, int>> rule(2);
        int r0 = f0, r1 = f1;
        for (int o : obs[0]) { rule[0][o] = r0 % 3; r0 /= 3; }
        for (int o : obs[1]) { rule[1][o] = r1 % 3; r1 /= 3; }
        GeneralPolicy pol = GeneralPolicy::Callback(
            [&, a1](int h, const History& hist) {
              Vec v = Vec::Zero(9);
              if (h == 1) {
                v[a1] = 1.0;
              } else {
                auto od = m.split_obs(hist.o(2));
                v[m.join_action({rule[0].at(od[0]), rule[1].at(od[1])})] = 1.0;
              }
              return v;
            });
        best = std::max(best, policy_value_exact(m, pol, 0));
      }
    }
  }
  return best;
}

TEST_SUITE("planning") {

TEST_CASE("constant reward gives H times the reward") {
  PosgModel m = fixture::UniformModel(1, {2, 2}, {2, 2}, 3, 0.3);
  for (SolverKind k : {SolverKind::kNEZeroSum, SolverKind::kNECooperative,
                       SolverKind::kCCE, SolverKind::kCE}) {
    EquilibriumSolution s =
        vi_common_info(m, SharingPattern::OneStepDelay(), k, SolverOptions{});
    CHECK(s.root_values()[0] == doctest::Approx(0.9));
    CHECK(s.root_values()[1] == doctest::Approx(0.9));
    CHECK(s.max_gap() <= 1e-12);
    GeneralPolicy g = as_general(s.policy, m);
    CHECK(policy_value_exact(m, g, 1) == doctest::Approx(0.9));
  }
}

TEST_CASE("one-shot matching pennies through observations") {
  PosgModel m = matching_pennies_posg(1);
  SolverOptions opt;
  opt.eps_e = 0.01;
  EquilibriumSolution s =
      vi_common_info(m, SharingPattern::OneStepDelay(), SolverKind::kNEZeroSum, opt);
  CHECK(std::abs(s.root_values()[0] - 0.5) <= opt.eps_e);

  // Pure/pure: the loser gains the full unit payoff by switching (the
  // +-1 game rescaled to [0, 1]).
  GapReport pure = policy_gap(m, PurePennies(0, 0), SolverKind::kNEZeroSum);
  CHECK(pure.gap == doctest::Approx(1.0));

  // Best response to a fixed opponent wins every round.
  ApproxCommonModel g = ApproxCommonModel::Exact(m, SharingPattern::OneStepDelay());
  CHECK(best_response_policy(g, PurePennies(0, 0), 1, SolverKind::kNEZeroSum)
            .root_value == doctest::Approx(1.0));
  CHECK(best_response_policy(g, PurePennies(0, 1), 0, SolverKind::kNEZeroSum)
            .root_value == doctest::Approx(1.0));
}

TEST_CASE("dec-tiger cooperative planning is bounded by the team optimum") {
  PosgModel m = dectiger(2);
  SolverOptions opt;
  opt.eps_e = 0.01;
  EquilibriumSolution s = vi_common_info(m, SharingPattern::OneStepDelay(),
                                         SolverKind::kNECooperative, opt);
  const double team = DecTigerTeamOptimum(m);
  CHECK(s.root_values()[0] <= team + 1e-9);
  GapReport rep = policy_gap(m, s.policy, SolverKind::kNECooperative);
  CHECK(rep.gap <= opt.eps_e + 1e-6);
  CHECK(m.reward_map->to_raw(team / 2) * 2 == doctest::Approx(-4.0));
}

TEST_CASE("value recursion and certified gaps") {
  PosgModel m = random_observable_posg(3, 2, {2, 2}, {2, 2}, 3, 0.2);
  const auto osd = SharingPattern::OneStepDelay();
  SolverOptions opt;
  for (SolverKind k : {SolverKind::kCCE, SolverKind::kCE}) {
    ApproxCommonModel g = ApproxCommonModel::Exact(m, osd);
    EquilibriumSolution s = vi_approx(g, k, opt);
    auto again = evaluate_policy(g, s.policy);
    for (int h = 1; h <= 3; ++h) {
      for (int key = 0; key < g.num_keys(h); ++key) {
        REQUIRE((again[h - 1][key] - s.values[h - 1][key]).cwiseAbs().maxCoeff() <=
                1e-9);
      }
    }
    GapReport rep = policy_gap(m, s.policy, k);
    CHECK(rep.gap <= 3 * opt.eps_e + 1e-6);
    CHECK(rep.gap >= -1e-9);
    CHECK((rep.values - s.root_values()).cwiseAbs().maxCoeff() <= 1e-9);
  }
}

TEST_CASE("identity compression gives the same gap") {
  PosgModel m = random_observable_posg(4, 2, {2, 2}, {2, 2}, 2, 0.2,
                                       {true, ActionInfluence::kAll});
  const auto osd = SharingPattern::OneStepDelay();
  SolverOptions opt;
  EquilibriumSolution exact = vi_common_info(m, osd, SolverKind::kNEZeroSum, opt);
  ApproxCommonModel full = build_consistent_model(
      m, osd, CompressionScheme{2}, BeliefSource::kUniformPrior);
  EquilibriumSolution approx = vi_approx(full, SolverKind::kNEZeroSum, opt);
  CHECK(policy_gap(m, approx.policy, SolverKind::kNEZeroSum).gap ==
        doctest::Approx(policy_gap(m, exact.policy, SolverKind::kNEZeroSum).gap)
            .epsilon(1e-6));
}

TEST_CASE("value difference bound under a compressed model") {
  PosgModel m = random_observable_posg(5, 2, {2, 2}, {2, 2}, 3, 0.3);
  const auto osd = SharingPattern::OneStepDelay();
  const int H = 3;
  for (int L = 0; L <= 2; ++L) {
    ApproxCommonModel g = build_consistent_model(
        m, osd, CompressionScheme{L}, BeliefSource::kUniformPrior);
    EquilibriumSolution s = vi_approx(g, SolverKind::kCCE, SolverOptions{});
    ModelErrors err = measure_model_errors(m, g, {});
    Vec truth = policy_values_exact(m, as_general(s.policy, m));
    Vec inside = evaluate_policy(g, s.policy)[0][0];
    const double bound = H * err.eps_r + H * (H - 1) / 2.0 * err.eps_z + 1e-6;
    CHECK((truth - inside).cwiseAbs().maxCoeff() <= bound);
  }
}

TEST_CASE("exact policy value") {
  PosgModel m = random_observable_posg(6, 2, {2, 2}, {2, 2}, 3, 0.3);
  EquilibriumSolution s = vi_common_info(m, SharingPattern::OneStepDelay(),
                                         SolverKind::kCCE, SolverOptions{});
  GeneralPolicy pol = as_general(s.policy, m);
  const double v = policy_value_exact(m, pol, 0);
  // Monte Carlo within 3 standard errors.
  const int N = 100000;
  double sum = 0.0, sq = 0.0;
  for (const Trajectory& t : sample_batch(m, pol, 77, N)) {
    const double r = t.return_of(0);
    sum += r;
    sq += r * r;
  }
  const double mean = sum / N;
  const double se = std::sqrt((sq / N - mean * mean) / N);
  CHECK(std::abs(mean - v) <= 3 * se);

  // Linearity in mixture weights (one step, where a behavioral mixture and
  // a mixture of policies coincide).
  GeneralPolicy a = GeneralPolicy::FixedAction(4, 1);
  GeneralPolicy b = GeneralPolicy::Uniform(4);
  GeneralPolicy mix = GeneralPolicy::Callback([&](int h, const History& hist) {
    return Vec(0.5 * a(h, hist) + 0.5 * b(h, hist));
  });
  PosgModel one = random_observable_posg(6, 2, {2, 2}, {2, 2}, 1, 0.3);
  CHECK(policy_value_exact(one, mix, 0) ==
        doctest::Approx(0.5 * policy_value_exact(one, a, 0) +
                        0.5 * policy_value_exact(one, b, 0)));
}

TEST_CASE("determinism and policy round trip") {
  PosgModel m = random_observable_posg(7, 2, {2, 2}, {2, 2}, 2, 0.2);
  const auto osd = SharingPattern::OneStepDelay();
  EquilibriumSolution a = vi_common_info(m, osd, SolverKind::kCE, SolverOptions{});
  EquilibriumSolution b = vi_common_info(m, osd, SolverKind::kCE, SolverOptions{});
  const std::string ja = policy_to_json(a.policy).dump();
  CHECK(ja == policy_to_json(b.policy).dump());
  CommonInfoPolicy back = policy_from_json(policy_to_json(a.policy));
  CHECK(policy_to_json(back).dump() == ja);
  CHECK(policy_values_exact(m, as_general(back, m)).isApprox(
      policy_values_exact(m, as_general(a.policy, m))));
}

}  // TEST_SUITE

}  // namespace
}  // namespace posgci
