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
#include "oracles.h"
#include "posgci/bench.h"
#include "posgci/stage.h"

namespace posgci {
namespace {

PrescriptionProfile RandomProfile(const StageGame& g, Rng& rng) {
  PrescriptionProfile prof;
  for (int i = 0; i < g.num_agents(); ++i) {
    Mat m(g.private_count(i), g.action_count(i));
    for (int p = 0; p < m.rows(); ++p) {
      m.row(p) = rng.simplex(g.action_count(i)).transpose();
    }
    prof.push_back(m);
  }
  return prof;
}

// Predictive over (p, a) x o from a random belief on a random model.
struct Fixture {
  PosgModel model;
  Mat belief;
  std::vector<int> pc;
};

Fixture RandomFixture(std::uint64_t seed) {
  Fixture f;
  f.model = random_observable_posg(seed, 2, {2, 2}, {2, 2}, 2, 0.3);
  f.pc = {2, 2};
  Rng rng(seed + 100);
  Vec flat = rng.simplex(2 * 4);
  f.belief = Eigen::Map<Mat>(flat.data(), 2, 4);
  return f;
}

StageGame RandomStage(std::uint64_t seed, double shift = 0.0) {
  Fixture f = RandomFixture(seed);
  Rng rng(seed + 7);
  std::vector<Vec> cont(4 * 4 * 4);
  for (Vec& v : cont) v = Vec::Constant(2, shift) + 0.5 * rng.simplex(2);
  return StageGame::FromBelief(
      f.model, 1, f.belief, f.pc,
      [cont](int p, int a, int o) { return cont[(p * 4 + a) * 4 + o]; }, 2.0);
}

Mat MP() {
  Mat g(1, 4);
  g << 1, -1, -1, 1;
  return g;
}

MixedProfile Pure(int a0, int a1) {
  Mat x = Mat::Zero(1, 2), y = Mat::Zero(1, 2);
  x(0, a0) = 1;
  y(0, a1) = 1;
  return single({x, y});
}

TEST_SUITE("stage") {

TEST_CASE("constant reward with zero continuation") {
  Fixture f = RandomFixture(1);
  StageGame g = StageGame::FromBelief(
      f.model, 1, f.belief, f.pc,
      [](int, int, int) { return Vec::Zero(2); }, 1.0);
  // Swap in a constant-reward copy of the model.
  PosgModel m = f.model;
  for (Mat& r : m.rewards) r.setConstant(0.3);
  StageGame c = StageGame::FromBelief(
      m, 1, f.belief, f.pc, [](int, int, int) { return Vec::Zero(2); }, 1.0);
  Rng rng(2);
  for (int t = 0; t < 10; ++t) {
    PrescriptionProfile prof = RandomProfile(c, rng);
    CHECK(stage_q(c, prof, 0) == doctest::Approx(0.3));
    CHECK(stage_q(c, prof, 1) == doctest::Approx(0.3));
  }
  CHECK(g.num_agents() == 2);
}

TEST_CASE("stage value matches brute force") {
  Fixture f = RandomFixture(3);
  Rng rng(8);
  std::vector<Vec> cont(64);
  for (Vec& v : cont) v = rng.simplex(2);
  auto cfn = [&](int p, int a, int o) { return cont[(p * 4 + a) * 4 + o]; };
  StageGame g = StageGame::FromBelief(f.model, 1, f.belief, f.pc, cfn, 2.0);
  for (int t = 0; t < 20; ++t) {
    PrescriptionProfile prof = RandomProfile(g, rng);
    for (int i = 0; i < 2; ++i) {
      const double brute = oracle::StageValueBruteForce(
          f.model, 1, f.belief, f.pc, prof, [&](int p, int a, int o) {
            return f.model.r(i, 2, o) + cfn(p, a, o)[i];
          });
      CHECK(stage_q(g, prof, i) == doctest::Approx(brute).epsilon(1e-12));
    }
  }
}

TEST_CASE("multilinearity") {
  Rng rng(5);
  const double alpha = 0.37;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    StageGame g = RandomStage(seed);
    PrescriptionProfile x = RandomProfile(g, rng);
    for (int i = 0; i < 2; ++i) {
      PrescriptionProfile y = x, mix = x;
      y[i] = RandomProfile(g, rng)[i];
      mix[i] = alpha * x[i] + (1 - alpha) * y[i];
      for (int j = 0; j < 2; ++j) {
        CHECK(std::abs(stage_q(g, mix, j) - alpha * stage_q(g, x, j) -
                       (1 - alpha) * stage_q(g, y, j)) <= 1e-10);
      }
    }
  }
}

TEST_CASE("gradient agrees with finite differences") {
  Rng rng(6);
  const double h = 1e-6;
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    StageGame g = RandomStage(seed);
    PrescriptionProfile x = RandomProfile(g, rng);
    const int i = static_cast<int>(seed % 2);
    Mat grad = stage_q_gradient(g, x, i);
    for (int p = 0; p < g.private_count(i); ++p) {
      // Move mass h from action 1 to action 0 (stays on the simplex).
      PrescriptionProfile y = x;
      y[i](p, 0) += h;
      y[i](p, 1) -= h;
      const double fd = (stage_q(g, y, i) - stage_q(g, x, i)) / h;
      worst = std::max(worst, std::abs(fd - (grad(p, 0) - grad(p, 1))));
    }
  }
  CHECK(worst <= 1e-5);
}

TEST_CASE("gradient rows") {
  // Private value 1 of agent 0 has zero probability.
  Mat g0 = Mat::Zero(2, 4);
  g0.row(0) << 0.2, 0.4, 0.6, 0.8;
  StageGame g({2, 1}, {2, 2}, {g0, g0}, 1.0);
  PrescriptionProfile u = uniform_profile(g);
  Mat grad = stage_q_gradient(g, u, 0);
  CHECK(grad.row(1).cwiseAbs().maxCoeff() == 0.0);
  // Single private value, reward only: row = expected reward per action.
  CHECK(grad(0, 0) == doctest::Approx(0.3));
  CHECK(grad(0, 1) == doctest::Approx(0.7));
}

TEST_CASE("prescription best response") {
  Mat g0(2, 2);
  g0 << 1, 0, 0, 2;
  StageGame g({2, 1}, {2, 1}, {g0, Mat::Zero(2, 2)}, 1.0);
  Prescription br = prescription_best_response(g, single(uniform_profile(g)), 0);
  CHECK(br(0, 0) == 1.0);
  CHECK(br(1, 1) == 1.0);

  Mat tie(1, 2);
  tie << 0.5, 0.5;
  StageGame t({1, 1}, {2, 1}, {tie, tie}, 1.0);
  CHECK(prescription_best_response(t, single(uniform_profile(t)), 0)(0, 0) ==
        1.0);

  // Brute force over all deterministic prescriptions and dominance over
  // random ones.
  Rng rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const int P = 1 + trial % 3;
    std::vector<Mat> pay(2, Mat(P * 2, 4));
    for (Mat& m : pay) {
      for (int r = 0; r < m.rows(); ++r) {
        for (int c = 0; c < 4; ++c) m(r, c) = rng.uniform();
      }
    }
    StageGame sg({P, 2}, {2, 2}, pay, 1.0);
    MixedProfile opp = single(RandomProfile(sg, rng));
    MixedProfile dev = opp;
    dev.components[0][0] = prescription_best_response(sg, opp, 0);
    const double v = stage_q(sg, dev, 0);
    CHECK(v == doctest::Approx(oracle::BestPureBruteForce(sg, opp, 0)));
    for (int k = 0; k < 200 / 30 + 1; ++k) {
      MixedProfile other = opp;
      other.components[0][0] = RandomProfile(sg, rng)[0];
      CHECK(v >= stage_q(sg, other, 0) - 1e-12);
    }
  }
}

TEST_CASE("matching pennies") {
  StageGame g({1, 1}, {2, 2}, {MP(), -MP()}, 2.0);
  SolverOptions opt;
  opt.eps_e = 0.01;
  StageSolution s = solve_stage(g, SolverKind::kNEZeroSum, opt);
  CHECK(std::abs(stage_q(g, s.profile, 0)) <= 0.01);
  for (int i = 0; i < 2; ++i) {
    double p0 = 0.0;
    for (const auto& c : s.profile.components) p0 += c[i](0, 0);
    p0 /= s.profile.size();
    CHECK(std::abs(p0 - 0.5) <= 0.05);
  }
  Mat half = Mat::Constant(1, 2, 0.5);
  CHECK(std::abs(stage_gap(g, single({half, half}), SolverKind::kNEZeroSum)) <=
        1e-9);
  CHECK(stage_gap(g, Pure(0, 0), SolverKind::kNEZeroSum) == doctest::Approx(2.0));
}

TEST_CASE("solvers certify on a randomized suite") {
  SolverOptions opt;
  opt.eps_e = 0.01;
  Rng rng(13);
  for (int trial = 0; trial < 8; ++trial) {
    std::vector<Mat> pay(2, Mat(4, 4));
    for (int r = 0; r < 4; ++r) {
      for (int c = 0; c < 4; ++c) {
        pay[0](r, c) = rng.uniform() * 0.25;
        pay[1](r, c) = rng.uniform() * 0.25;
      }
    }
    StageGame general({2, 2}, {2, 2}, pay, 1.0);
    StageGame zero({2, 2}, {2, 2}, {pay[0], Mat(0.25 * Mat::Ones(4, 4) - pay[0])},
                   1.0);
    StageGame coop({2, 2}, {2, 2}, {pay[0], pay[0]}, 1.0);
    for (auto [game, kind] :
         {std::pair{&zero, SolverKind::kNEZeroSum},
          std::pair{&coop, SolverKind::kNECooperative},
          std::pair{&general, SolverKind::kCCE},
          std::pair{&general, SolverKind::kCE}}) {
      StageSolution s = solve_stage(*game, kind, opt);
      CHECK(stage_gap(*game, s.profile, kind) <= opt.eps_e);
      CHECK(s.gap <= opt.eps_e);
    }
  }
}

TEST_CASE("ne_zerosum on a general-sum game falls back with a warning") {
  Mat a(1, 4), b(1, 4);
  a << 0.9, 0.1, 0.2, 0.3;
  b << 0.9, 0.0, 0.0, 0.5;
  StageGame g({1, 1}, {2, 2}, {a, b}, 1.0);
  StageSolution s = solve_stage(g, SolverKind::kNEZeroSum, SolverOptions{});
  CHECK(s.kind == SolverKind::kCCE);
  CHECK(!s.warning.empty());
  CHECK_THROWS_AS(
      solve_stage(StageGame({1, 1, 1}, {2, 2, 2},
                            {Mat::Zero(1, 8), Mat::Zero(1, 8), Mat::Zero(1, 8)}),
                  SolverKind::kNEZeroSum, SolverOptions{}),
      ConfigError);
}

TEST_CASE("scale covariance") {
  Rng rng(17);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    StageGame g = RandomStage(seed), shifted = RandomStage(seed, 0.4);
    MixedProfile x = single(RandomProfile(g, rng));
    for (int i = 0; i < 2; ++i) {
      CHECK(stage_q(shifted, x, i) - stage_q(g, x, i) == doctest::Approx(0.4));
      CHECK((prescription_best_response(g, x, i) -
             prescription_best_response(shifted, x, i))
                .norm() == 0.0);
    }
    for (SolverKind k : {SolverKind::kCCE, SolverKind::kCE}) {
      CHECK(stage_gap(shifted, x, k) ==
            doctest::Approx(stage_gap(g, x, k)).epsilon(1e-12));
    }
  }
}

TEST_CASE("solver kind names") {
  for (SolverKind k : {SolverKind::kNEZeroSum, SolverKind::kNECooperative,
                       SolverKind::kCCE, SolverKind::kCE}) {
    CHECK(solver_kind_from_name(solver_kind_name(k)) == k);
  }
  CHECK_THROWS_AS(solver_kind_from_name("nash"), ConfigError);
}

}  // TEST_SUITE

}  // namespace
}  // namespace posgci
