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
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "fixtures.h"
#include "posgci/bench.h"
#include "posgci/enumerate.h"
#include "posgci/model.h"
#include "posgci/model_io.h"

namespace posgci {
namespace {

bool Mentions(const ValidationReport& report, const std::string& needle) {
  for (const Violation& v : report) {
    if (v.location.find(needle) != std::string::npos) return true;
  }
  return false;
}

TEST_SUITE("model") {

TEST_CASE("encode and decode joint indices") {
  CHECK(encode_joint({1, 0}, {2, 3}) == 3);
  CHECK(decode_joint(5, {2, 3}) == std::vector<int>{1, 2});
  CHECK(encode_joint({0, 0, 0}, {4, 4, 4}) == 0);
  CHECK_THROWS_AS(encode_joint({2, 0}, {2, 3}), std::out_of_range);
  CHECK_THROWS_AS(decode_joint(6, {2, 3}), std::out_of_range);
}

TEST_CASE("round trip on radices up to (4,4,4)") {
  for (int r0 = 1; r0 <= 4; ++r0) {
    for (int r1 = 1; r1 <= 4; ++r1) {
      for (int r2 = 1; r2 <= 4; ++r2) {
        const std::vector<int> radices{r0, r1, r2};
        std::int64_t expected = 0;
        for (int a = 0; a < r0; ++a) {
          for (int b = 0; b < r1; ++b) {
            for (int c = 0; c < r2; ++c) {
              const std::vector<int> v{a, b, c};
              const std::int64_t idx = encode_joint(v, radices);
              REQUIRE(idx == expected++);
              REQUIRE(decode_joint(idx, radices) == v);
            }
          }
        }
        CHECK(expected == radix_product(radices));
      }
    }
  }
}

TEST_CASE("validation reports violations by location") {
  CHECK(validate_model(dectiger(2)).empty());

  PosgModel bad_t = fixture::UniformModel(2, {2, 2}, {2, 2}, 2);
  bad_t.transitions[0][3](1, 0) -= 0.1;  // row sums to 0.9
  ValidationReport r1 = validate_model(bad_t);
  REQUIRE(r1.size() == 1);
  CHECK(r1[0].location == "transition h=1, s=1, a=3");

  PosgModel bad_r = fixture::UniformModel(2, {2, 2}, {2, 2}, 2);
  bad_r.rewards[1](2, 1) = 1.5;
  ValidationReport r2 = validate_model(bad_r);
  REQUIRE(r2.size() == 1);
  CHECK(r2[0].location == "reward i=1, h=3, o=2");
  CHECK(Mentions(r2, "reward"));
  CHECK_THROWS_AS(require_valid(bad_r), ModelError);
}

TEST_CASE("deterministic model yields the unique trajectory") {
  PosgModel m = fixture::SwapModel(3);
  Trajectory t = sample_trajectory(m, GeneralPolicy::FixedAction(2, 1), 42);
  CHECK(t.states == std::vector<int>{0, 1, 0, 1});
  CHECK(t.actions == std::vector<int>{1, 1, 1});
  CHECK(t.observations == std::vector<int>{1, 0, 1});
  CHECK(t.return_of(0) == doctest::Approx(2.0));
  History h3 = t.prefix(3);
  CHECK(h3.actions == std::vector<int>{1, 1});
  CHECK(h3.observations == std::vector<int>{1, 0});
}

TEST_CASE("sampling is a pure function of the seed") {
  PosgModel m = random_observable_posg(3, 3, {2, 2}, {3, 3}, 3, 0.3);
  GeneralPolicy u = GeneralPolicy::Uniform(m.num_joint_actions());
  for (std::uint64_t seed : {0ull, 1ull, 99ull}) {
    Trajectory a = sample_trajectory(m, u, seed);
    Trajectory b = sample_trajectory(m, u, seed);
    CHECK(a.states == b.states);
    CHECK(a.actions == b.actions);
    CHECK(a.observations == b.observations);
  }
  auto one = sample_batch(m, u, 5, 50, 1);
  auto four = sample_batch(m, u, 5, 50, 4);
  for (int k = 0; k < 50; ++k) {
    CHECK(one[k].observations == four[k].observations);
    CHECK(one[k].actions == four[k].actions);
  }
}

TEST_CASE("invalid model is rejected by the sampler") {
  PosgModel m = fixture::UniformModel(2, {2}, {2}, 1);
  m.initial[0] = 0.7;
  CHECK_THROWS_AS(sample_trajectory(m, GeneralPolicy::Uniform(2), 1),
                  ModelError);
}

TEST_CASE("fair-coin emission frequencies") {
  PosgModel m = fixture::UniformModel(1, {1}, {2}, 1);
  auto batch = sample_batch(m, GeneralPolicy::Uniform(1), 7, 10000);
  int ones = 0;
  for (const Trajectory& t : batch) ones += t.observations[0];
  CHECK(std::abs(ones / 10000.0 - 0.5) <= 0.02);
}

TEST_CASE("empirical trajectory law matches enumeration") {
  PosgModel m = random_observable_posg(11, 2, {2}, {3}, 2, 0.4);
  GeneralPolicy u = GeneralPolicy::Uniform(m.num_joint_actions());
  std::map<History, double> exact;
  for_each_history(m, u, m.horizon + 1,
                   [&](int h, const History& hist, const Vec& alpha) {
                     if (h == m.horizon + 1) exact[hist] = alpha.sum();
                     return true;
                   });
  const int N = 100000;
  std::map<History, double> freq;
  for (const Trajectory& t : sample_batch(m, u, 3, N)) {
    freq[t.prefix(m.horizon + 1)] += 1.0 / N;
  }
  double tv = 0.0;
  for (const auto& [h, p] : exact) tv += std::abs(p - freq[h]);
  CHECK(0.5 * tv <= 0.02);
}

TEST_CASE("model json round trip") {
  PosgModel m = dectiger(2);
  PosgModel back = model_from_json(model_to_json(m));
  CHECK(back.name == m.name);
  CHECK(back.num_states == m.num_states);
  CHECK(back.reward_map.has_value());
  CHECK((back.T(2, 4) - m.T(2, 4)).norm() == 0.0);
  CHECK((back.O(3) - m.O(3)).norm() == 0.0);
  Json doc = model_to_json(m);
  doc["extra"] = 1;
  CHECK_THROWS_AS(model_from_json(doc), ConfigError);
}

}  // TEST_SUITE

}  // namespace
}  // namespace posgci
