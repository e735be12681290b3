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

#include "posgci/common_game.h"

namespace posgci {

int exact_memory(const SharingPattern& pattern, int horizon) {
  return horizon + pattern.delay + 1;
}

CommonGame::CommonGame(PosgModel model, SharingPattern pattern, int memory)
    : model_(std::move(model)),
      pattern_(pattern),
      memory_(memory),
      rewards_(model_.rewards) {
  if (memory_ < 0) throw ConfigError("memory length must be >= 0");
  pattern_.check_model(model_);
  const int H = horizon(), A = joint_actions(), O = joint_obs();
  for (int h = 1; h <= H; ++h) {
    spaces_.push_back(posgci::private_space(pattern_, model_, h));
    std::vector<Mat> per_a;
    for (int a = 0; a < A; ++a) per_a.push_back(model_.T(h, a) * model_.O(h + 1));
    push_.push_back(std::move(per_a));
  }
  increments_.resize(H);
  z_index_.resize(H);
  for (int h = 1; h <= H; ++h) {
    const PrivateSpace& ps = spaces_[h - 1];
    std::map<InfoKey, int> seen;
    auto& table = z_index_[h - 1];
    table.assign(static_cast<size_t>(ps.joint) * A * O, -1);
    for (int p = 0; p < ps.joint; ++p) {
      std::vector<int> priv = ps.decode(p);
      for (int a = 0; a < A; ++a) {
        for (int o = 0; o < O; ++o) {
          InfoKey z =
              evolve_information(pattern_, model_, h, priv, a, o).increment;
          auto [it, fresh] = seen.emplace(z, static_cast<int>(seen.size()));
          if (fresh) increments_[h - 1].push_back(z);
          table[(static_cast<size_t>(p) * A + a) * O + o] = it->second;
        }
      }
    }
  }
}

int CommonGame::find_key(int h, const InfoKey& key) const {
  const auto& idx = index_[h - 1];
  auto it = idx.find(key);
  return it == idx.end() ? -1 : it->second;
}

void CommonGame::Build(std::int64_t budget) {
  const int H = horizon(), A = joint_actions(), O = joint_obs();
  keys_.assign(H, {});
  index_.assign(H, {});
  predictive_.assign(H, {});
  next_.assign(H, {});
  cells_ = 0;
  keys_[0].push_back(InfoKey{});
  index_[0][InfoKey{}] = 0;
  for (int h = 1; h <= H; ++h) {
    const int P = spaces_[h - 1].joint;
    const int Z = num_increments(h);
    for (size_t k = 0; k < keys_[h - 1].size(); ++k) {
      cells_ += static_cast<std::int64_t>(P) * A * O;
      if (cells_ > budget) {
        throw CapacityError("common information game exceeds the cell budget",
                            cells_);
      }
      Mat pred = compute_predictive(h, keys_[h - 1][k]);
      std::vector<int> nk(Z, -1);
      if (h < H) {
        for (int p = 0; p < P; ++p) {
          for (int a = 0; a < A; ++a) {
            for (int o = 0; o < O; ++o) {
              if (pred(p * A + a, o) <= 0.0) continue;
              int z = increment_index(h, p, a, o);
              if (nk[z] >= 0) continue;
              InfoKey next = evolve_compressed(pattern_, memory_, h,
                                               keys_[h - 1][k],
                                               increments_[h - 1][z]);
              auto [it, fresh] = index_[h].emplace(
                  next, static_cast<int>(keys_[h].size()));
              if (fresh) keys_[h].push_back(std::move(next));
              nk[z] = it->second;
            }
          }
        }
      }
      predictive_[h - 1].push_back(std::move(pred));
      next_[h - 1].push_back(std::move(nk));
    }
  }
}

StepDistribution step_distribution(const CommonGame& game, int h,
                                   const Mat& predictive, const Mat& weights) {
  const int A = game.joint_actions(), O = game.joint_obs();
  StepDistribution out{Vec::Zero(game.num_increments(h)), Vec::Zero(O)};
  for (Eigen::Index p = 0; p < weights.rows(); ++p) {
    for (int a = 0; a < A; ++a) {
      const double w = weights(p, a);
      if (w == 0.0) continue;
      for (int o = 0; o < O; ++o) {
        const double m = w * predictive(p * A + a, o);
        if (m == 0.0) continue;
        out.o[o] += m;
        out.z[game.increment_index(h, static_cast<int>(p), a, o)] += m;
      }
    }
  }
  return out;
}

}  // namespace posgci
