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

#include "posgci/stage.h"

#include <algorithm>
#include <cmath>
#include <limits>

namespace posgci {

std::string solver_kind_name(SolverKind kind) {
  switch (kind) {
    case SolverKind::kNEZeroSum: return "ne_zerosum";
    case SolverKind::kNECooperative: return "ne_cooperative";
    case SolverKind::kCCE: return "cce";
    case SolverKind::kCE: return "ce";
  }
  return "?";
}

SolverKind solver_kind_from_name(const std::string& name) {
  if (name == "ne_zerosum") return SolverKind::kNEZeroSum;
  if (name == "ne_cooperative") return SolverKind::kNECooperative;
  if (name == "cce") return SolverKind::kCCE;
  if (name == "ce") return SolverKind::kCE;
  throw ConfigError("unknown solver kind '" + name + "'");
}

StageGame::StageGame(std::vector<int> private_counts,
                     std::vector<int> action_counts, std::vector<Mat> payoff,
                     double scale)
    : private_counts_(std::move(private_counts)),
      action_counts_(std::move(action_counts)),
      joint_private_(static_cast<int>(radix_product(private_counts_))),
      joint_actions_(static_cast<int>(radix_product(action_counts_))),
      payoff_(std::move(payoff)),
      scale_(scale) {
  for (int p = 0; p < joint_private_; ++p) {
    p_digits_.push_back(decode_joint(p, private_counts_));
  }
  for (int a = 0; a < joint_actions_; ++a) {
    a_digits_.push_back(decode_joint(a, action_counts_));
  }
}

StageGame StageGame::FromPredictive(
    std::vector<int> private_counts, std::vector<int> action_counts,
    const Mat& joint, const std::function<double(int, int)>& reward,
    const std::function<Vec(int, int, int)>& continuation, double scale) {
  const int n = static_cast<int>(private_counts.size());
  const int P = static_cast<int>(radix_product(private_counts));
  const int A = static_cast<int>(radix_product(action_counts));
  const int O = static_cast<int>(joint.cols());
  std::vector<Mat> payoff(n, Mat::Zero(P, A));
  for (int p = 0; p < P; ++p) {
    for (int a = 0; a < A; ++a) {
      for (int o = 0; o < O; ++o) {
        double w = joint(p * A + a, o);
        if (w == 0.0) continue;
        Vec next = continuation(p, a, o);
        for (int i = 0; i < n; ++i) {
          payoff[i](p, a) += w * (reward(i, o) + next[i]);
        }
      }
    }
  }
  return StageGame(std::move(private_counts), std::move(action_counts),
                   std::move(payoff), scale);
}

StageGame StageGame::FromBelief(
    const PosgModel& model, int h, const Mat& belief,
    std::vector<int> private_counts,
    const std::function<Vec(int, int, int)>& continuation, double scale) {
  const int P = static_cast<int>(belief.cols());
  const int A = model.num_joint_actions();
  Mat joint(P * A, model.num_joint_obs());
  for (int a = 0; a < A; ++a) {
    Mat push = model.T(h, a) * model.O(h + 1);  // S x O
    for (int p = 0; p < P; ++p) {
      joint.row(p * A + a) = belief.col(p).transpose() * push;
    }
  }
  return FromPredictive(
      std::move(private_counts), model.action_counts, joint,
      [&](int i, int o) { return model.r(i, h + 1, o); }, continuation, scale);
}

PrescriptionProfile uniform_profile(const std::vector<int>& private_counts,
                                    const std::vector<int>& action_counts) {
  PrescriptionProfile prof;
  for (size_t i = 0; i < private_counts.size(); ++i) {
    prof.push_back(Mat::Constant(private_counts[i], action_counts[i],
                                 1.0 / action_counts[i]));
  }
  return prof;
}

PrescriptionProfile uniform_profile(const StageGame& game) {
  return uniform_profile(game.private_counts(), game.action_counts());
}

Mat profile_weights(const std::vector<int>& private_counts,
                    const std::vector<int>& action_counts,
                    const MixedProfile& mix) {
  const int n = static_cast<int>(private_counts.size());
  const int P = static_cast<int>(radix_product(private_counts));
  const int A = static_cast<int>(radix_product(action_counts));
  std::vector<std::vector<int>> pd(P), ad(A);
  for (int p = 0; p < P; ++p) pd[p] = decode_joint(p, private_counts);
  for (int a = 0; a < A; ++a) ad[a] = decode_joint(a, action_counts);
  Mat w = Mat::Zero(P, A);
  for (const auto& comp : mix.components) {
    for (int p = 0; p < P; ++p) {
      for (int a = 0; a < A; ++a) {
        double v = 1.0;
        for (int j = 0; j < n && v != 0.0; ++j) v *= comp[j](pd[p][j], ad[a][j]);
        w(p, a) += v;
      }
    }
  }
  return w / mix.size();
}

MixedProfile single(PrescriptionProfile profile) {
  MixedProfile mix;
  mix.components.push_back(std::move(profile));
  return mix;
}

double stage_q(const StageGame& g, const PrescriptionProfile& prof, int i) {
  const int n = g.num_agents();
  double total = 0.0;
  for (int p = 0; p < g.joint_private(); ++p) {
    for (int a = 0; a < g.joint_actions(); ++a) {
      double v = g.payoff(i)(p, a);
      if (v == 0.0) continue;
      double w = 1.0;
      for (int j = 0; j < n && w != 0.0; ++j) {
        w *= prof[j](g.p_digit(p, j), g.a_digit(a, j));
      }
      total += v * w;
    }
  }
  return total;
}

double stage_q(const StageGame& g, const MixedProfile& mix, int i) {
  double total = 0.0;
  for (const auto& c : mix.components) total += stage_q(g, c, i);
  return total / mix.size();
}

Mat stage_q_gradient(const StageGame& g, const PrescriptionProfile& prof,
                     int i) {
  const int n = g.num_agents();
  Mat coef = Mat::Zero(g.private_count(i), g.action_count(i));
  for (int p = 0; p < g.joint_private(); ++p) {
    const int pi = g.p_digit(p, i);
    for (int a = 0; a < g.joint_actions(); ++a) {
      double v = g.payoff(i)(p, a);
      if (v == 0.0) continue;
      double w = 1.0;
      for (int j = 0; j < n && w != 0.0; ++j) {
        if (j != i) w *= prof[j](g.p_digit(p, j), g.a_digit(a, j));
      }
      coef(pi, g.a_digit(a, i)) += v * w;
    }
  }
  return coef;
}

Mat stage_q_gradient(const StageGame& g, const MixedProfile& opponents,
                     int i) {
  Mat coef = Mat::Zero(g.private_count(i), g.action_count(i));
  for (const auto& c : opponents.components) coef += stage_q_gradient(g, c, i);
  return coef / opponents.size();
}

namespace {

Prescription RowArgmax(const Mat& coef) {
  Prescription out = Mat::Zero(coef.rows(), coef.cols());
  for (Eigen::Index r = 0; r < coef.rows(); ++r) {
    Eigen::Index best = 0;
    for (Eigen::Index c = 1; c < coef.cols(); ++c) {
      if (coef(r, c) > coef(r, best)) best = c;
    }
    out(r, best) = 1.0;
  }
  return out;
}

double RowMaxSum(const Mat& coef) { return coef.rowwise().maxCoeff().sum(); }

}  // namespace

Prescription prescription_best_response(const StageGame& g,
                                        const MixedProfile& opponents, int i) {
  return RowArgmax(stage_q_gradient(g, opponents, i));
}

SwapModification best_swap(const StageGame& g, const MixedProfile& mix, int i,
                           double* value) {
  const int P = g.private_count(i), A = g.action_count(i);
  // m[p](b, a) = avg_t gamma_i^t(b|p) c^t(p, a).
  std::vector<Mat> m(P, Mat::Zero(A, A));
  for (const auto& comp : mix.components) {
    Mat coef = stage_q_gradient(g, comp, i);
    for (int p = 0; p < P; ++p) {
      m[p] += comp[i].row(p).transpose() * coef.row(p);
    }
  }
  SwapModification swap(P, std::vector<int>(A));
  double total = 0.0;
  for (int p = 0; p < P; ++p) {
    m[p] /= mix.size();
    for (int b = 0; b < A; ++b) {
      int best = 0;
      for (int a = 1; a < A; ++a) {
        if (m[p](b, a) > m[p](b, best)) best = a;
      }
      swap[p][b] = best;
      total += m[p](b, best);
    }
  }
  if (value) *value = total;
  return swap;
}

Prescription apply_swap(const SwapModification& swap, const Prescription& g) {
  Prescription out = Mat::Zero(g.rows(), g.cols());
  for (Eigen::Index p = 0; p < g.rows(); ++p) {
    for (Eigen::Index b = 0; b < g.cols(); ++b) {
      out(p, swap[p][b]) += g(p, b);
    }
  }
  return out;
}

double stage_gap(const StageGame& g, const MixedProfile& sol,
                 SolverKind kind) {
  double gap = -1e300;
  for (int i = 0; i < g.num_agents(); ++i) {
    double current = stage_q(g, sol, i);
    double dev;
    if (kind == SolverKind::kCE) {
      best_swap(g, sol, i, &dev);
    } else {
      dev = RowMaxSum(stage_q_gradient(g, sol, i));
    }
    gap = std::max(gap, dev - current);
  }
  return gap;
}

bool is_zero_sum(const StageGame& g, double tol) {
  if (g.num_agents() != 2) return false;
  Mat sum = g.payoff(0) + g.payoff(1);
  for (int p = 0; p < g.joint_private(); ++p) {
    if (sum.row(p).maxCoeff() - sum.row(p).minCoeff() > tol) return false;
  }
  return true;
}

namespace {

double StepSize(const SolverOptions& opt, int actions, int t) {
  return opt.step_scale * std::sqrt(std::log(static_cast<double>(actions)) /
                                    static_cast<double>(t));
}

// Softmax of each row of `gains` at temperature eta.
Mat RowSoftmax(const Mat& gains, double eta) {
  Mat out(gains.rows(), gains.cols());
  for (Eigen::Index r = 0; r < gains.rows(); ++r) {
    double mx = gains.row(r).maxCoeff();
    for (Eigen::Index c = 0; c < gains.cols(); ++c) {
      out(r, c) = std::exp(eta * (gains(r, c) - mx));
    }
    out.row(r) /= out.row(r).sum();
  }
  return out;
}

// Row r at temperature eta[r].
Mat RowSoftmax(const Mat& gains, const Vec& eta) {
  Mat out(gains.rows(), gains.cols());
  for (Eigen::Index r = 0; r < gains.rows(); ++r) {
    out.row(r) = RowSoftmax(gains.row(r), eta[r]);
  }
  return out;
}

// Per-row adaptive temperature c * sqrt(ln A / sum of squared increments).
// Rows whose gains are damped (by P(p), or by the recommendation weight of a
// swap expert) get proportionally larger steps.
Vec AdaptiveSteps(const SolverOptions& opt, int actions, const Vec& sq) {
  const double la = std::log(static_cast<double>(actions));
  return sq.unaryExpr([&](double v) {
    return opt.step_scale * std::sqrt(la / std::max(v, 1e-12));
  });
}

// Stationary distribution x = x Q of a row-stochastic matrix.
Vec Stationary(const Mat& q) {
  const Eigen::Index A = q.rows();
  Mat m = q.transpose() - Mat::Identity(A, A);
  m.row(A - 1).setOnes();
  Vec rhs = Vec::Zero(A);
  rhs[A - 1] = 1.0;
  Vec x = m.fullPivLu().solve(rhs);
  x = x.cwiseMax(0.0);
  return x / x.sum();
}

// Alternating best responses from `prof` until no agent improves.
int AlternateBestResponses(const StageGame& g, const SolverOptions& opt,
                           PrescriptionProfile& prof) {
  const double tol = 1e-12 * std::max(1.0, g.scale());
  int sweeps = 0;
  for (; sweeps < opt.max_iters; ++sweeps) {
    bool changed = false;
    for (int i = 0; i < g.num_agents(); ++i) {
      Prescription br = prescription_best_response(g, single(prof), i);
      PrescriptionProfile cand = prof;
      cand[i] = br;
      if (stage_q(g, cand, i) > stage_q(g, prof, i) + tol) {
        prof = std::move(cand);
        changed = true;
      }
    }
    if (!changed) break;
  }
  return sweeps + 1;
}

// Alternating best response is a local search; it is restarted from every
// constant-action profile and from a greedy sequential start, keeping the
// best common payoff (earliest start on ties).
StageSolution SolveCooperative(const StageGame& g, const SolverOptions& opt) {
  const int n = g.num_agents();
  int max_actions = 0;
  for (int i = 0; i < n; ++i) max_actions = std::max(max_actions, g.action_count(i));
  std::vector<PrescriptionProfile> starts;
  {
    // Agent i best-responds to already fixed agents < i and uniform others.
    PrescriptionProfile prof = uniform_profile(g);
    for (int i = 0; i < n; ++i) {
      prof[i] = prescription_best_response(g, single(prof), i);
    }
    starts.push_back(std::move(prof));
  }
  for (int a = 0; a < max_actions; ++a) {
    PrescriptionProfile prof;
    for (int i = 0; i < n; ++i) {
      Mat d = Mat::Zero(g.private_count(i), g.action_count(i));
      d.col(std::min(a, g.action_count(i) - 1)).setOnes();
      prof.push_back(d);
    }
    starts.push_back(std::move(prof));
  }
  StageSolution sol;
  double best = -std::numeric_limits<double>::infinity();
  int iterations = 0;
  for (PrescriptionProfile& prof : starts) {
    iterations += AlternateBestResponses(g, opt, prof);
    double team = 0.0;
    for (int i = 0; i < n; ++i) team += stage_q(g, prof, i);
    if (team > best + 1e-12 * std::max(1.0, g.scale())) {
      best = team;
      sol.profile = single(prof);
    }
  }
  sol.kind = SolverKind::kNECooperative;
  sol.iterations = iterations;
  sol.gap = stage_gap(g, sol.profile, SolverKind::kNECooperative);
  if (sol.gap > opt.eps_e) {
    throw ConvergenceError("cooperative best-response dynamics", sol.gap);
  }
  return sol;
}

StageSolution SolveZeroSum(const StageGame& g, const SolverOptions& opt) {
  PrescriptionProfile x = uniform_profile(g);
  std::vector<Mat> gains(2), avg(2);
  for (int i = 0; i < 2; ++i) {
    gains[i] = Mat::Zero(g.private_count(i), g.action_count(i));
    avg[i] = Mat::Zero(g.private_count(i), g.action_count(i));
  }
  StageSolution sol;
  sol.kind = SolverKind::kNEZeroSum;
  double gap = 1e300;
  for (int t = 1; t <= opt.max_iters; ++t) {
    for (int i = 0; i < 2; ++i) avg[i] += x[i];
    Mat c0 = stage_q_gradient(g, x, 0), c1 = stage_q_gradient(g, x, 1);
    gains[0] += c0 / g.scale();
    gains[1] += c1 / g.scale();
    for (int i = 0; i < 2; ++i) {
      x[i] = RowSoftmax(gains[i], StepSize(opt, g.action_count(i), t + 1));
    }
    if (t % opt.check_every == 0 || t == opt.max_iters) {
      PrescriptionProfile mean = {avg[0] / t, avg[1] / t};
      sol.profile = single(mean);
      gap = stage_gap(g, sol.profile, SolverKind::kNEZeroSum);
      sol.iterations = t;
      if (gap <= opt.eps_e) break;
    }
  }
  sol.gap = gap;
  if (gap > opt.eps_e) {
    throw ConvergenceError("zero-sum multiplicative weights", gap);
  }
  return sol;
}

// External-regret (CCE) or swap-regret (CE) dynamics with running
// certificates; the returned mixture is the list of iterates.
StageSolution SolveNoRegret(const StageGame& g, SolverKind kind,
                            const SolverOptions& opt) {
  const int n = g.num_agents();
  const bool swap = kind == SolverKind::kCE;
  PrescriptionProfile x = uniform_profile(g);
  // External: gains[i] is P_i x A_i. Swap: one A_i x A_i gain matrix per
  // (i, p_i), row b belonging to the expert for recommendation b.
  std::vector<Mat> gains(n);
  std::vector<std::vector<Mat>> swap_gains(n);
  std::vector<Vec> sq(n);
  std::vector<std::vector<Vec>> swap_sq(n);
  // Running certificates.
  std::vector<Mat> sum_coef(n);
  std::vector<std::vector<Mat>> sum_m(n);
  std::vector<double> sum_value(n, 0.0);
  for (int i = 0; i < n; ++i) {
    const int P = g.private_count(i), A = g.action_count(i);
    gains[i] = Mat::Zero(P, A);
    sum_coef[i] = Mat::Zero(P, A);
    swap_gains[i].assign(P, Mat::Zero(A, A));
    sum_m[i].assign(P, Mat::Zero(A, A));
    sq[i] = Vec::Zero(P);
    swap_sq[i].assign(P, Vec::Zero(A));
  }
  StageSolution sol;
  sol.kind = kind;
  double gap = 1e300;
  int t = 1;
  for (; t <= opt.max_iters; ++t) {
    sol.profile.components.push_back(x);
    std::vector<Mat> coef(n);
    for (int i = 0; i < n; ++i) coef[i] = stage_q_gradient(g, x, i);
    for (int i = 0; i < n; ++i) {
      const int P = g.private_count(i), A = g.action_count(i);
      sum_value[i] += x[i].cwiseProduct(coef[i]).sum();
      if (!swap) {
        sum_coef[i] += coef[i];
        const Mat inc = coef[i] / g.scale();
        gains[i] += inc;
        sq[i] += inc.cwiseAbs().rowwise().maxCoeff().cwiseAbs2();
        x[i] = RowSoftmax(gains[i], AdaptiveSteps(opt, A, sq[i]));
        continue;
      }
      for (int p = 0; p < P; ++p) {
        Mat outer = x[i].row(p).transpose() * coef[i].row(p);
        sum_m[i][p] += outer;
        const Mat inc = outer / g.scale();
        swap_gains[i][p] += inc;
        swap_sq[i][p] += inc.cwiseAbs().rowwise().maxCoeff().cwiseAbs2();
        Mat q = RowSoftmax(swap_gains[i][p], AdaptiveSteps(opt, A, swap_sq[i][p]));
        x[i].row(p) = Stationary(q).transpose();
      }
    }
    if (t % opt.check_every == 0 || t == opt.max_iters) {
      gap = -1e300;
      for (int i = 0; i < n; ++i) {
        double dev = 0.0;
        if (swap) {
          for (const Mat& m : sum_m[i]) dev += m.rowwise().maxCoeff().sum();
        } else {
          dev = RowMaxSum(sum_coef[i]);
        }
        gap = std::max(gap, (dev - sum_value[i]) / t);
      }
      if (gap <= opt.eps_e) break;
    }
  }
  sol.iterations = std::min(t, opt.max_iters);
  sol.gap = stage_gap(g, sol.profile, kind);
  if (sol.gap > opt.eps_e) {
    throw ConvergenceError(std::string(swap ? "swap" : "external") +
                               "-regret dynamics",
                           sol.gap);
  }
  return sol;
}

}  // namespace

StageSolution solve_stage(const StageGame& g, SolverKind kind,
                          const SolverOptions& opt) {
  switch (kind) {
    case SolverKind::kNECooperative:
      return SolveCooperative(g, opt);
    case SolverKind::kNEZeroSum: {
      if (g.num_agents() != 2) {
        throw ConfigError("ne_zerosum needs exactly two agents");
      }
      if (!is_zero_sum(g)) {
        StageSolution sol = SolveNoRegret(g, SolverKind::kCCE, opt);
        sol.warning = "stage game is not zero-sum; solved for a CCE instead";
        return sol;
      }
      return SolveZeroSum(g, opt);
    }
    case SolverKind::kCCE:
    case SolverKind::kCE:
      return SolveNoRegret(g, kind, opt);
  }
  throw std::logic_error("solve_stage: unknown kind");
}

}  // namespace posgci
