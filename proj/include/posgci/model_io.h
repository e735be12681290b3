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

#ifndef POSGCI_MODEL_IO_H_
#define POSGCI_MODEL_IO_H_

#include <initializer_list>
#include <string>

#include "json.hpp"
#include "posgci/model.h"

namespace posgci {

using Json = nlohmann::ordered_json;

// Model documents are JSON objects with the fields
//   name, horizon, num_agents, num_states, action_counts, obs_counts,
//   initial [S], transitions [H][A_joint][S][S], emissions [H+1][S][O_joint],
//   rewards [H][n][O_joint] (rewards[k] is step k+2),
//   reward_map {offset, scale} (optional), metadata (optional, free-form).
// Unknown fields are rejected.
Json model_to_json(const PosgModel& model);
PosgModel model_from_json(const Json& doc);

PosgModel load_model(const std::string& path);
void save_model(const PosgModel& model, const std::string& path);

Json vec_to_json(const Vec& v);
Json mat_to_json(const Mat& m);
Vec vec_from_json(const Json& j, const std::string& where);
Mat mat_from_json(const Json& j, const std::string& where);

// Throws ConfigError naming the first key of `doc` not in `allowed`.
void reject_unknown_keys(const Json& doc,
                         std::initializer_list<const char*> allowed,
                         const std::string& where);

}  // namespace posgci

#endif  // POSGCI_MODEL_IO_H_
