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

#ifndef POSGCI_BELIEF_H_
#define POSGCI_BELIEF_H_

#include <cmath>
#include <vector>

#include "posgci/common.h"
#include "posgci/model.h"

namespace posgci {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

// F^q(prior; y)(x) = prior(x) q(y|x) / sum_x' prior(x') q(y|x').
// kernel(x, y) = q(y|x).
template <typename Scalar>
VectorX<Scalar> posterior_update(const VectorX<Scalar>& prior,
                                 const MatrixX<Scalar>& kernel, int y) {
  VectorX<Scalar> post = prior.cwiseProduct(kernel.col(y));
  Scalar z = post.sum();
  if (!(z > Scalar(0))) {
    throw ZeroLikelihood("posterior_update: outcome " + std::to_string(y) +
                         " has zero likelihood under the prior");
  }
  return post / z;
}

// D_2(p || q) = ln sum_x p(x)^2 / q(x), natural log.
template <typename Scalar>
Scalar renyi2(const VectorX<Scalar>& p, const VectorX<Scalar>& q) {
  Scalar acc(0);
  for (Eigen::Index x = 0; x < p.size(); ++x) {
    if (p[x] <= Scalar(0)) continue;
    if (q[x] <= Scalar(0)) {
      throw AbsoluteContinuityError("renyi2: p(x) > 0 = q(x) at x = " +
                                    std::to_string(x));
    }
    acc += p[x] * p[x] / q[x];
  }
  using std::log;
  return std::max(Scalar(0), log(acc));
}

template <typename Scalar>
Scalar l1_distance(const VectorX<Scalar>& p, const VectorX<Scalar>& q) {
  return (p - q).cwiseAbs().sum();
}

enum class FilterMode { kPreObs, kPostObs, kIndividual };

// T_h(a)^T b.
Vec transition_push(const PosgModel& model, int h, const Vec& belief, int a);

// Emission kernel of agent i's own component at step h: S x O_i.
Mat marginal_emission(const PosgModel& model, int h, int agent);

// U_h(b; a, o) = B_{h+1}(T_h(a)^T b; o).
Vec belief_step(const PosgModel& model, int h, const Vec& belief, int a,
                int o);

// Exact belief at step h = actions.size() + 1 started from mu_1.
// observations holds o_2..o_h for kPostObs and o_2..o_{h-1} otherwise; for
// kIndividual the last update is B_{agent,h}(.; own_obs).
Vec exact_filter(const PosgModel& model, const std::vector<int>& actions,
                 const std::vector<int>& observations, FilterMode mode,
                 int agent = 0, int own_obs = -1);

// Finite-memory belief at step h using the window that starts at
// step k = window_start: actions a_{k..h-1} and observations o_{k+1..h}
// (o_{k+1..h-1} for kPreObs / kIndividual). If k <= 1 the window is the full
// history and the filter starts from mu_1 at step 1, otherwise from `prior`
// placed at step k (before o_k).
Vec approx_filter(const PosgModel& model, int h, int window_start,
                  const std::vector<int>& actions,
                  const std::vector<int>& observations, const Vec& prior,
                  FilterMode mode, int agent = 0, int own_obs = -1);

// min over state pairs of ||O_h(.|s) - O_h(.|s')||_1 / 2. An upper bound on
// the observability constant (only one-hot differences are examined).
double observability_estimate(const PosgModel& model, int h);

}  // namespace posgci

#endif  // POSGCI_BELIEF_H_
