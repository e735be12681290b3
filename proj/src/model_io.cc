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

#include "posgci/model_io.h"

#include <fstream>
#include <sstream>

namespace posgci {

Json vec_to_json(const Vec& v) {
  Json out = Json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) out.push_back(v[k]);
  return out;
}

Json mat_to_json(const Mat& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    out.push_back(vec_to_json(m.row(r).transpose()));
  }
  return out;
}

Vec vec_from_json(const Json& j, const std::string& where) {
  if (!j.is_array()) throw ConfigError(where + ": expected an array");
  Vec v(j.size());
  for (size_t k = 0; k < j.size(); ++k) {
    if (!j[k].is_number()) {
      throw ConfigError(where + "[" + std::to_string(k) + "]: expected a number");
    }
    v[k] = j[k].get<double>();
  }
  return v;
}

Mat mat_from_json(const Json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) {
    throw ConfigError(where + ": expected a non-empty array of rows");
  }
  Mat m(j.size(), j[0].size());
  for (size_t r = 0; r < j.size(); ++r) {
    Vec row = vec_from_json(j[r], where + "[" + std::to_string(r) + "]");
    if (row.size() != m.cols()) throw ConfigError(where + ": ragged rows");
    m.row(r) = row.transpose();
  }
  return m;
}

void reject_unknown_keys(const Json& doc,
                         std::initializer_list<const char*> allowed,
                         const std::string& where) {
  if (!doc.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, value] : doc.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw ConfigError(where + ": unknown field '" + key + "'");
  }
}

namespace {

const Json& Required(const Json& doc, const char* key) {
  if (!doc.contains(key)) {
    throw ConfigError(std::string("missing required field '") + key + "'");
  }
  return doc.at(key);
}

int RequiredInt(const Json& doc, const char* key) {
  const Json& j = Required(doc, key);
  if (!j.is_number_integer()) {
    throw ConfigError(std::string("field '") + key + "' must be an integer");
  }
  return j.get<int>();
}

std::vector<int> IntList(const Json& j, const std::string& where) {
  if (!j.is_array()) throw ConfigError(where + ": expected an array");
  std::vector<int> out;
  for (const auto& x : j) {
    if (!x.is_number_integer()) throw ConfigError(where + ": expected integers");
    out.push_back(x.get<int>());
  }
  return out;
}

}  // namespace

Json model_to_json(const PosgModel& m) {
  Json doc;
  doc["name"] = m.name;
  doc["horizon"] = m.horizon;
  doc["num_agents"] = m.num_agents;
  doc["num_states"] = m.num_states;
  doc["action_counts"] = m.action_counts;
  doc["obs_counts"] = m.obs_counts;
  doc["initial"] = vec_to_json(m.initial);
  Json trans = Json::array();
  for (const auto& per_step : m.transitions) {
    Json step = Json::array();
    for (const Mat& t : per_step) step.push_back(mat_to_json(t));
    trans.push_back(step);
  }
  doc["transitions"] = trans;
  Json emis = Json::array();
  for (const Mat& e : m.emissions) emis.push_back(mat_to_json(e));
  doc["emissions"] = emis;
  Json rew = Json::array();
  for (const Mat& r : m.rewards) rew.push_back(mat_to_json(r.transpose()));
  doc["rewards"] = rew;
  if (m.reward_map) {
    doc["reward_map"] = {{"offset", m.reward_map->offset},
                         {"scale", m.reward_map->scale}};
  }
  return doc;
}

PosgModel model_from_json(const Json& doc) {
  reject_unknown_keys(doc,
                      {"name", "horizon", "num_agents", "num_states",
                       "action_counts", "obs_counts", "initial", "transitions",
                       "emissions", "rewards", "reward_map", "metadata"},
                      "model");
  PosgModel m;
  if (doc.contains("name")) m.name = doc.at("name").get<std::string>();
  m.horizon = RequiredInt(doc, "horizon");
  m.num_agents = RequiredInt(doc, "num_agents");
  m.num_states = RequiredInt(doc, "num_states");
  m.action_counts = IntList(Required(doc, "action_counts"), "action_counts");
  m.obs_counts = IntList(Required(doc, "obs_counts"), "obs_counts");
  m.initial = vec_from_json(Required(doc, "initial"), "initial");
  for (const auto& step : Required(doc, "transitions")) {
    std::vector<Mat> per_step;
    for (const auto& t : step) per_step.push_back(mat_from_json(t, "transitions"));
    m.transitions.push_back(std::move(per_step));
  }
  for (const auto& e : Required(doc, "emissions")) {
    m.emissions.push_back(mat_from_json(e, "emissions"));
  }
  for (const auto& r : Required(doc, "rewards")) {
    m.rewards.push_back(mat_from_json(r, "rewards").transpose());
  }
  if (doc.contains("reward_map")) {
    const Json& rm = doc.at("reward_map");
    reject_unknown_keys(rm, {"offset", "scale"}, "reward_map");
    m.reward_map = RewardAffine{Required(rm, "offset").get<double>(),
                                Required(rm, "scale").get<double>()};
  }
  require_valid(m);
  return m;
}

PosgModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open model file '" + path + "'");
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("model file '" + path + "': " + e.what());
  }
  return model_from_json(doc);
}

void save_model(const PosgModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << model_to_json(model).dump(1) << "\n";
}

}  // namespace posgci
