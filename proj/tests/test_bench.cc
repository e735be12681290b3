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
#include <vector>

#include "doctest.h"
#include "posgci/belief.h"
#include "posgci/bench.h"
#include "posgci/model_io.h"

namespace posgci {
namespace {

TEST_SUITE("bench") {

TEST_CASE("dec-tiger structure") {
  PosgModel m = dectiger(3);
  CHECK(validate_model(m).empty());
  CHECK(m.num_states == 18);
  CHECK(m.obs_counts == std::vector<int>{6, 6});
  const int listen = m.join_action({0, 0});
  for (int h = 1; h <= 3; ++h) {
    for (int a = 0; a < 9; ++a) {
      for (int s = 0; s < 18; ++s) {
        const Vec row = m.T(h, a).row(s).transpose();
        const int nz = static_cast<int>((row.array() > 0).count());
        if (a == listen) {
          CHECK(nz == 1);
        } else {
          // Reset: the tiger is behind either door with probability 1/2.
          CHECK(nz == 2);
          CHECK(row.maxCoeff() == doctest::Approx(0.5));
        }
      }
    }
  }
  // After a joint listen each agent hears the correct side with 0.85.
  for (int tiger = 0; tiger < 2; ++tiger) {
    const int s = dectiger_state(tiger, 0, 0);
    for (int i = 0; i < 2; ++i) {
      Mat e = marginal_emission(m, 2, i);
      CHECK(e(s, tiger * 3 + 0) == doctest::Approx(0.85));
      CHECK(e(s, (1 - tiger) * 3 + 0) == doctest::Approx(0.15));
    }
  }
}

TEST_CASE("dec-tiger rewards round trip") {
  PosgModel m = dectiger(2);
  REQUIRE(m.reward_map.has_value());
  const RewardAffine map = *m.reward_map;
  CHECK(dectiger_raw_reward(0, 0) == -2.0);
  CHECK(dectiger_raw_reward(0, 1) == 9.0);
  CHECK(dectiger_raw_reward(0, 2) == -101.0);
  CHECK(dectiger_raw_reward(1, 1) == 20.0);
  CHECK(dectiger_raw_reward(2, 2) == -50.0);
  CHECK(dectiger_raw_reward(1, 2) == -100.0);
  for (int e0 = 0; e0 < 3; ++e0) {
    for (int e1 = 0; e1 < 3; ++e1) {
      const double raw = dectiger_raw_reward(e0, e1);
      CHECK(dectiger_raw_reward(e1, e0) == raw);
      const double norm = map.to_normalized(raw);
      CHECK(norm >= 0.0);
      CHECK(norm <= 1.0);
      CHECK(std::abs(map.to_raw(norm) - raw) <= 1e-9);
      // The reward is carried by the observation of the event pair.
      const int o = m.join_obs({e0, e1});
      CHECK(m.r(0, 2, o) == doctest::Approx(norm));
      CHECK(m.r(1, 2, o) == doctest::Approx(norm));
    }
  }
}

TEST_CASE("random observable instances") {
  PosgModel a = random_observable_posg(9, 2, {2, 2}, {2, 2}, 3, 0.0);
  CHECK(observability_estimate(a, 2) == doctest::Approx(1.0));
  PosgModel b = random_observable_posg(9, 2, {2, 2}, {2, 2}, 3, 0.2);
  CHECK(observability_estimate(b, 2) == doctest::Approx(0.8));
  PosgModel c = random_observable_posg(9, 2, {2, 2}, {2, 2}, 3, 0.2);
  CHECK(model_to_json(b).dump() == model_to_json(c).dump());
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    for (ActionInfluence inf :
         {ActionInfluence::kAll, ActionInfluence::kFirstAgent,
          ActionInfluence::kNone}) {
      PosgModel m = random_observable_posg(seed, 3, {2, 3}, {2, 2}, 2, 0.3,
                                           {seed % 2 == 0, inf});
      CHECK(validate_model(m).empty());
    }
  }
  CHECK_THROWS_AS(random_observable_posg(1, 3, {2}, {2}, 2, 0.1), ModelError);
  CHECK_THROWS_AS(random_observable_posg(1, 2, {2}, {2}, 2, 1.5), ModelError);
  CHECK_THROWS_AS(random_observable_posg(1, 2, {2, 2, 2}, {2, 2, 2}, 2, 0.1,
                                         {true, ActionInfluence::kAll}),
                  ModelError);
}

TEST_CASE("constant-sum option") {
  PosgModel m = random_observable_posg(4, 2, {2, 2}, {2, 2}, 2, 0.1,
                                       {true, ActionInfluence::kAll});
  for (const Mat& r : m.rewards) {
    CHECK(((r.col(0) + r.col(1)).array() - 1.0).abs().maxCoeff() <= 1e-15);
  }
}

TEST_CASE("repeated matching pennies") {
  PosgModel m = matching_pennies_posg(2);
  CHECK(validate_model(m).empty());
  for (int a0 = 0; a0 < 2; ++a0) {
    for (int a1 = 0; a1 < 2; ++a1) {
      const int a = m.join_action({a0, a1});
      // Each agent sees the other's move.
      int s = 0, o = 0;
      m.T(1, a).row(0).maxCoeff(&s);
      m.O(2).row(s).maxCoeff(&o);
      const auto od = m.split_obs(o);
      CHECK(od[0] == a1);
      CHECK(od[1] == a0);
      CHECK(m.r(0, 2, o) == (a0 == a1 ? 1.0 : 0.0));
    }
  }
}

}  // TEST_SUITE

}  // namespace
}  // namespace posgci
