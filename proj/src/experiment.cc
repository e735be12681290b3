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

#include "posgci/experiment.h"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <memory>
#include <ostream>
#include <sstream>

#include "posgci/model_io.h"
#include "posgci/planning.h"

namespace posgci {

std::string mode_name(ExperimentMode mode) {
  switch (mode) {
    case ExperimentMode::kPlan: return "plan";
    case ExperimentMode::kLearn: return "learn";
    case ExperimentMode::kEvaluate: return "evaluate";
    case ExperimentMode::kSweepL: return "sweep-L";
  }
  return "?";
}

ExperimentMode mode_from_name(const std::string& name) {
  if (name == "plan") return ExperimentMode::kPlan;
  if (name == "learn") return ExperimentMode::kLearn;
  if (name == "evaluate") return ExperimentMode::kEvaluate;
  if (name == "sweep-L") return ExperimentMode::kSweepL;
  throw ConfigError("unknown mode '" + name + "'");
}

namespace {

// 1-based line of the first `"key":` in the raw text, 0 if not found.
int LineOf(const std::string& text, const std::string& key) {
  const std::string quoted = "\"" + key + "\"";
  size_t pos = 0;
  while ((pos = text.find(quoted, pos)) != std::string::npos) {
    size_t after = pos + quoted.size();
    while (after < text.size() && std::isspace(static_cast<unsigned char>(
                                      text[after]))) {
      ++after;
    }
    if (after < text.size() && text[after] == ':') {
      return 1 + static_cast<int>(std::count(text.begin(), text.begin() + pos,
                                             '\n'));
    }
    pos = after;
  }
  return 0;
}

class Reader {
 public:
  explicit Reader(const std::string& text) : text_(text) {}

  void Allow(const Json& obj, const std::string& where,
             std::initializer_list<const char*> allowed) const {
    if (!obj.is_object()) throw ConfigError(where + ": expected an object");
    for (const auto& [key, value] : obj.items()) {
      bool ok = false;
      for (const char* a : allowed) ok = ok || key == a;
      if (ok) continue;
      const int line = LineOf(text_, key);
      throw ConfigError(where + ": unknown field '" + key + "'" +
                        (line > 0 ? " at line " + std::to_string(line) : ""));
    }
  }

  template <typename T>
  T Get(const Json& obj, const char* key, const std::string& where,
        const T& fallback) const {
    if (!obj.contains(key)) return fallback;
    return Convert<T>(obj.at(key), key, where);
  }

  template <typename T>
  T Need(const Json& obj, const char* key, const std::string& where) const {
    if (!obj.contains(key)) {
      throw ConfigError(where + ": missing required field '" + key + "'");
    }
    return Convert<T>(obj.at(key), key, where);
  }

 private:
  template <typename T>
  T Convert(const Json& j, const char* key, const std::string& where) const {
    const int line = LineOf(text_, key);
    const std::string at =
        where + "." + key + (line > 0 ? " (line " + std::to_string(line) + ")"
                                      : "");
    if constexpr (std::is_same_v<T, bool>) {
      if (!j.is_boolean()) throw ConfigError(at + ": expected a boolean");
    } else if constexpr (std::is_integral_v<T>) {
      if (!j.is_number_integer()) throw ConfigError(at + ": expected an integer");
      if (std::is_unsigned_v<T> && j.get<std::int64_t>() < 0 &&
          !j.is_number_unsigned()) {
        throw ConfigError(at + ": expected a non-negative integer");
      }
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!j.is_number()) throw ConfigError(at + ": expected a number");
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!j.is_string()) throw ConfigError(at + ": expected a string");
    } else {
      if (!j.is_array()) throw ConfigError(at + ": expected an array");
      for (const auto& x : j) {
        if (!x.is_number_integer()) {
          throw ConfigError(at + ": expected integers");
        }
      }
    }
    return j.get<T>();
  }

  const std::string& text_;
};

ActionInfluence InfluenceFromName(const std::string& name) {
  if (name == "all") return ActionInfluence::kAll;
  if (name == "first_agent") return ActionInfluence::kFirstAgent;
  if (name == "none") return ActionInfluence::kNone;
  throw ConfigError("unknown action influence '" + name + "'");
}

BeliefSource BeliefFromName(const std::string& name) {
  if (name == "uniform_prior") return BeliefSource::kUniformPrior;
  if (name == "occupancy_prior") return BeliefSource::kOccupancyPrior;
  throw ConfigError("unknown belief source '" + name +
                    "' (uniform_prior | occupancy_prior)");
}

std::string BeliefName(BeliefSource b) {
  switch (b) {
    case BeliefSource::kExact: return "exact";
    case BeliefSource::kUniformPrior: return "uniform_prior";
    case BeliefSource::kOccupancyPrior: return "occupancy_prior";
  }
  return "?";
}

bool ConstantSum(const PosgModel& model, double tol = 1e-9) {
  if (model.num_agents != 2) return false;
  double lo = 1e300, hi = -1e300;
  for (const Mat& r : model.rewards) {
    Vec s = r.col(0) + r.col(1);
    lo = std::min(lo, s.minCoeff());
    hi = std::max(hi, s.maxCoeff());
  }
  return hi - lo <= tol;
}

std::string Num(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

void WriteFile(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  out << body;
}

Json VecJson(const Vec& v) { return vec_to_json(v); }

Json RawValues(const PosgModel& model, const Vec& v) {
  if (!model.reward_map) return nullptr;
  // Raw return of H steps: sum of per-step raw rewards.
  Vec raw(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    raw[i] = v[i] * model.reward_map->scale +
             model.horizon * model.reward_map->offset;
  }
  return vec_to_json(raw);
}

struct Timer {
  std::chrono::steady_clock::time_point start =
      std::chrono::steady_clock::now();
  double ms() const {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - start)
        .count();
  }
};

std::unique_ptr<ApproxCommonModel> PlanningGame(const ExperimentConfig& c,
                                                const PosgModel& model,
                                                std::optional<int> memory) {
  if (!memory) {
    return std::make_unique<ApproxCommonModel>(
        ApproxCommonModel::Exact(model, c.pattern));
  }
  std::vector<Vec> priors;
  if (c.belief == BeliefSource::kOccupancyPrior) {
    priors = occupancy_priors(
        model, GeneralPolicy::Uniform(model.num_joint_actions()));
  }
  return std::make_unique<ApproxCommonModel>(build_consistent_model(
      model, c.pattern, CompressionScheme{*memory}, c.belief, priors));
}

Json BaseSummary(const ExperimentConfig& c, const PosgModel& model) {
  Json s;
  s["mode"] = mode_name(c.mode);
  s["instance"] = model.name;
  s["horizon"] = model.horizon;
  s["num_agents"] = model.num_agents;
  s["pattern"] = c.pattern.name();
  s["delay"] = c.pattern.delay;
  s["memory"] = c.memory ? Json(*c.memory) : Json(nullptr);
  s["belief"] = c.memory ? BeliefName(c.belief) : "exact";
  s["kind"] = solver_kind_name(c.kind);
  s["eps_e"] = c.solver.eps_e;
  s["seed"] = c.seed;
  return s;
}

void RunPlan(const ExperimentConfig& c, const PosgModel& model,
             const std::filesystem::path& out) {
  Timer total;
  auto game = PlanningGame(c, model, c.memory);
  EquilibriumSolution sol = vi_approx(*game, c.kind, c.solver);
  const int n = model.num_agents;

  std::ostringstream table;
  table << "step,key_count,gap";
  for (int i = 0; i < n; ++i) table << ",value_" << i;
  table << ",wall_ms\n";
  std::ostringstream values;
  values << "step,key";
  for (int i = 0; i < n; ++i) values << ",value_" << i;
  values << "\n";
  for (int h = 1; h <= model.horizon; ++h) {
    const int keys = game->num_keys(h);
    double gap = 0.0;
    Vec mean = Vec::Zero(n);
    for (int k = 0; k < keys; ++k) {
      gap = std::max(gap, sol.gaps[h - 1][k]);
      mean += sol.values[h - 1][k];
      values << h << "," << key_to_string(game->key(h, k));
      for (int i = 0; i < n; ++i) values << "," << Num(sol.values[h - 1][k][i]);
      values << "\n";
    }
    mean /= std::max(keys, 1);
    table << h << "," << keys << "," << Num(gap);
    for (int i = 0; i < n; ++i) table << "," << Num(mean[i]);
    table << "," << Num(c.record_timing ? sol.wall_ms[h - 1] : 0.0) << "\n";
  }
  WriteFile(out / "plan.csv", table.str());
  WriteFile(out / "values.csv", values.str());
  WriteFile(out / "policy.json", policy_to_json(sol.policy).dump(1) + "\n");

  Json s = BaseSummary(c, model);
  s["root_values"] = VecJson(sol.root_values());
  s["root_values_raw"] = RawValues(model, sol.root_values());
  s["max_stage_gap"] = sol.max_gap();
  Json keys = Json::array();
  for (int h = 1; h <= model.horizon; ++h) keys.push_back(game->num_keys(h));
  s["key_counts"] = keys;
  if (c.exact_gap) {
    GapReport rep = policy_gap(model, sol.policy, c.kind);
    s["gap"] = rep.gap;
    s["policy_values"] = VecJson(rep.values);
    s["deviation_values"] = VecJson(rep.deviation);
  }
  s["warnings"] = sol.warnings;
  s["wall_ms"] = c.record_timing ? total.ms() : 0.0;
  WriteFile(out / "summary.json", s.dump(1) + "\n");
}

void RunSweep(const ExperimentConfig& c, const PosgModel& model,
              const std::filesystem::path& out) {
  std::ostringstream table;
  table << "L,eps_r,eps_z,gap\n";
  Json rows = Json::array();
  ErrorOptions eo;
  eo.seed = c.seed;
  for (int L = 0; L <= model.horizon; ++L) {
    auto game = PlanningGame(c, model, L);
    EquilibriumSolution sol = vi_approx(*game, c.kind, c.solver);
    ModelErrors err = measure_model_errors(model, *game, {}, eo);
    GapReport rep = policy_gap(model, sol.policy, c.kind);
    const int H = model.horizon;
    const double bound =
        2.0 * H * err.eps_r + H * H * err.eps_z + H * c.solver.eps_e;
    table << L << "," << Num(err.eps_r) << "," << Num(err.eps_z) << ","
          << Num(rep.gap) << "\n";
    rows.push_back({{"L", L},
                    {"eps_r", err.eps_r},
                    {"eps_z", err.eps_z},
                    {"gap", rep.gap},
                    {"bound", bound},
                    {"max_stage_gap", sol.max_gap()},
                    {"vertices_complete", err.vertices_complete}});
  }
  WriteFile(out / "sweep.csv", table.str());
  Json s = BaseSummary(c, model);
  s["error_policy_set"] = "all general policies";
  s["error_mode"] = "exact";
  s["rows"] = rows;
  WriteFile(out / "summary.json", s.dump(1) + "\n");
}

void RunEvaluate(const ExperimentConfig& c, const PosgModel& model,
                 const std::filesystem::path& out) {
  std::ifstream in(c.policy_path);
  if (!in) throw ConfigError("cannot open policy file '" + c.policy_path + "'");
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("policy file '" + c.policy_path + "': " + e.what());
  }
  CommonInfoPolicy policy = policy_from_json(doc);
  if (policy.action_counts != model.action_counts ||
      policy.horizon != model.horizon) {
    throw ConfigError("policy does not match the instance's horizon/actions");
  }
  if (policy.pattern.kind != c.pattern.kind ||
      policy.pattern.delay != c.pattern.delay) {
    throw ConfigError("policy was built for pattern '" + policy.pattern.name() +
                      "', config says '" + c.pattern.name() + "'");
  }
  GapReport rep = policy_gap(model, policy, c.kind);
  std::ostringstream table;
  table << "agent,value,deviation,gain\n";
  for (int i = 0; i < model.num_agents; ++i) {
    table << i << "," << Num(rep.values[i]) << "," << Num(rep.deviation[i])
          << "," << Num(rep.per_agent[i]) << "\n";
  }
  WriteFile(out / "evaluate.csv", table.str());
  Json s = BaseSummary(c, model);
  s["policy_memory"] = policy.memory;
  s["gap"] = rep.gap;
  s["policy_values"] = VecJson(rep.values);
  s["policy_values_raw"] = RawValues(model, rep.values);
  s["deviation_values"] = VecJson(rep.deviation);
  WriteFile(out / "summary.json", s.dump(1) + "\n");
}

void RunLearn(const ExperimentConfig& c, const PosgModel& model,
              const std::filesystem::path& out) {
  Timer total;
  LearnConfig lc = c.learn;
  lc.eps_e = c.solver.eps_e;
  lc.seed = c.seed;
  lc.threads = c.threads;
  Sampler sampler = model_sampler(model, c.threads);
  LaciResult res = laci(sampler, model, c.pattern, CompressionScheme{*c.memory},
                        c.kind, lc);
  std::ostringstream table;
  table << "group,model_keys,unvisited_keys,unvisited_cells,selection_score\n";
  for (size_t g = 0; g < res.model_keys.size(); ++g) {
    table << g << "," << res.model_keys[g] << "," << res.unvisited_keys[g]
          << "," << res.unvisited_cells[g] << ","
          << Num(g < res.selection_score.size() ? res.selection_score[g] : 0.0)
          << "\n";
  }
  WriteFile(out / "learn.csv", table.str());
  WriteFile(out / "policy.json", policy_to_json(res.policy).dump(1) + "\n");

  Json s = BaseSummary(c, model);
  s["groups"] = lc.groups;
  s["n0"] = lc.n0;
  s["n2"] = lc.n2;
  s["selected"] = res.selected;
  s["candidate_root_values"] = Json::array();
  for (const auto& sol : res.candidates) {
    s["candidate_root_values"].push_back(VecJson(sol.root_values()));
  }
  Vec v = policy_values_exact(model, as_general(res.policy, model));
  s["policy_values"] = VecJson(v);
  s["policy_values_raw"] = RawValues(model, v);
  if (c.exact_gap) s["gap"] = policy_gap(model, res.policy, c.kind).gap;
  s["wall_ms"] = c.record_timing ? total.ms() : 0.0;
  WriteFile(out / "summary.json", s.dump(1) + "\n");
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  Reader rd(text);
  rd.Allow(doc, "config",
           {"mode", "seed", "threads", "instance", "pattern", "scheme",
            "solver", "learn", "evaluate", "plan", "output"});
  ExperimentConfig c;
  c.mode = mode_from_name(rd.Get<std::string>(doc, "mode", "config", "plan"));
  c.seed = rd.Get<std::uint64_t>(doc, "seed", "config", 0);
  c.threads = rd.Get<int>(doc, "threads", "config", 1);

  if (!doc.contains("instance")) {
    throw ConfigError("config: missing required field 'instance'");
  }
  const Json& inst = doc.at("instance");
  rd.Allow(inst, "instance",
           {"kind", "horizon", "seed", "num_states", "action_counts",
            "obs_counts", "eta", "zero_sum", "influence", "path"});
  InstanceSpec& is = c.instance;
  is.kind = rd.Need<std::string>(inst, "kind", "instance");
  is.horizon = rd.Need<int>(inst, "horizon", "instance");
  is.seed = rd.Get<std::uint64_t>(inst, "seed", "instance", 0);
  is.num_states = rd.Get<int>(inst, "num_states", "instance", is.num_states);
  is.action_counts = rd.Get<std::vector<int>>(inst, "action_counts", "instance",
                                              is.action_counts);
  is.obs_counts =
      rd.Get<std::vector<int>>(inst, "obs_counts", "instance", is.obs_counts);
  is.eta = rd.Get<double>(inst, "eta", "instance", is.eta);
  is.zero_sum = rd.Get<bool>(inst, "zero_sum", "instance", false);
  is.influence = InfluenceFromName(
      rd.Get<std::string>(inst, "influence", "instance", "all"));
  is.path = rd.Get<std::string>(inst, "path", "instance", "");
  if (is.horizon < 1) throw ConfigError("instance.horizon must be >= 1");

  if (doc.contains("pattern")) {
    const Json& p = doc.at("pattern");
    rd.Allow(p, "pattern", {"name", "delay"});
    c.pattern = SharingPattern::FromName(rd.Need<std::string>(p, "name", "pattern"),
                                         rd.Get<int>(p, "delay", "pattern", 1));
  }
  if (doc.contains("scheme")) {
    const Json& s = doc.at("scheme");
    rd.Allow(s, "scheme", {"memory", "belief"});
    if (s.contains("memory") && !s.at("memory").is_null()) {
      c.memory = rd.Need<int>(s, "memory", "scheme");
      if (*c.memory < 0) throw ConfigError("scheme.memory must be >= 0");
    }
    c.belief = BeliefFromName(
        rd.Get<std::string>(s, "belief", "scheme", "uniform_prior"));
  }
  if (doc.contains("solver")) {
    const Json& s = doc.at("solver");
    rd.Allow(s, "solver",
             {"kind", "eps_e", "max_iters", "step_scale", "check_every"});
    c.kind = solver_kind_from_name(rd.Need<std::string>(s, "kind", "solver"));
    c.solver.eps_e = rd.Get<double>(s, "eps_e", "solver", c.solver.eps_e);
    c.solver.max_iters = rd.Get<int>(s, "max_iters", "solver", c.solver.max_iters);
    c.solver.step_scale =
        rd.Get<double>(s, "step_scale", "solver", c.solver.step_scale);
    c.solver.check_every =
        rd.Get<int>(s, "check_every", "solver", c.solver.check_every);
    if (!(c.solver.eps_e > 0.0)) throw ConfigError("solver.eps_e must be > 0");
  }
  if (doc.contains("learn")) {
    const Json& l = doc.at("learn");
    rd.Allow(l, "learn",
             {"n0", "n2", "zeta1", "zeta2", "theta1", "theta2", "delta1",
              "phi", "constant_c", "groups"});
    LearnConfig& lc = c.learn;
    lc.n0 = rd.Get<std::int64_t>(l, "n0", "learn", lc.n0);
    lc.n2 = rd.Get<std::int64_t>(l, "n2", "learn", lc.n2);
    lc.zeta1 = rd.Get<double>(l, "zeta1", "learn", lc.zeta1);
    lc.zeta2 = rd.Get<double>(l, "zeta2", "learn", lc.zeta2);
    lc.theta1 = rd.Get<double>(l, "theta1", "learn", lc.theta1);
    lc.theta2 = rd.Get<double>(l, "theta2", "learn", lc.theta2);
    lc.delta1 = rd.Get<double>(l, "delta1", "learn", lc.delta1);
    lc.phi = rd.Get<double>(l, "phi", "learn", lc.phi);
    lc.constant_c = rd.Get<double>(l, "constant_c", "learn", lc.constant_c);
    lc.groups = rd.Get<int>(l, "groups", "learn", lc.groups);
    lc.validate();
  }
  if (doc.contains("evaluate")) {
    const Json& e = doc.at("evaluate");
    rd.Allow(e, "evaluate", {"policy"});
    c.policy_path = rd.Need<std::string>(e, "policy", "evaluate");
  }
  if (doc.contains("plan")) {
    const Json& p = doc.at("plan");
    rd.Allow(p, "plan", {"exact_gap"});
    c.exact_gap = rd.Get<bool>(p, "exact_gap", "plan", true);
  }
  if (doc.contains("output")) {
    const Json& o = doc.at("output");
    rd.Allow(o, "output", {"dir", "timing"});
    c.out_dir = rd.Get<std::string>(o, "dir", "output", c.out_dir);
    c.record_timing = rd.Get<bool>(o, "timing", "output", true);
  }

  if (c.mode == ExperimentMode::kLearn && !c.memory) {
    throw ConfigError("learn mode requires scheme.memory");
  }
  if (c.mode == ExperimentMode::kEvaluate && c.policy_path.empty()) {
    throw ConfigError("evaluate mode requires evaluate.policy");
  }
  if (c.threads < 1) throw ConfigError("threads must be >= 1");
  validate_config(c, build_instance(c.instance));
  return c;
}

ExperimentConfig parse_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

PosgModel build_instance(const InstanceSpec& spec) {
  PosgModel m;
  if (spec.kind == "dectiger") {
    m = dectiger(spec.horizon);
  } else if (spec.kind == "matching_pennies") {
    m = matching_pennies_posg(spec.horizon);
  } else if (spec.kind == "random_observable") {
    m = random_observable_posg(spec.seed, spec.num_states, spec.action_counts,
                               spec.obs_counts, spec.horizon, spec.eta,
                               {spec.zero_sum, spec.influence});
  } else if (spec.kind == "file") {
    if (spec.path.empty()) throw ConfigError("instance.path is required");
    m = load_model(spec.path);
    if (m.horizon != spec.horizon) {
      throw ConfigError("instance.horizon (" + std::to_string(spec.horizon) +
                        ") differs from the model file (" +
                        std::to_string(m.horizon) + ")");
    }
  } else {
    throw ConfigError("unknown instance kind '" + spec.kind +
                      "' (dectiger | random_observable | matching_pennies | "
                      "file)");
  }
  require_valid(m);
  return m;
}

void validate_config(const ExperimentConfig& config, const PosgModel& model) {
  if (config.kind == SolverKind::kNEZeroSum) {
    if (model.num_agents != 2) {
      throw ConfigError("solver.kind ne_zerosum requires a two-agent instance (" +
                        std::to_string(model.num_agents) + " agents)");
    }
    if (!ConstantSum(model)) {
      throw ConfigError("solver.kind ne_zerosum requires a constant-sum "
                        "instance");
    }
  }
  config.pattern.check_model(model);
}

int run_experiment(const ExperimentConfig& config, std::ostream& log) {
  try {
    PosgModel model = build_instance(config.instance);
    validate_config(config, model);
    std::filesystem::path out(config.out_dir);
    std::error_code ec;
    std::filesystem::create_directories(out, ec);
    if (ec) {
      throw ConfigError("cannot create output directory '" + config.out_dir +
                        "': " + ec.message());
    }
    switch (config.mode) {
      case ExperimentMode::kPlan: RunPlan(config, model, out); break;
      case ExperimentMode::kSweepL: RunSweep(config, model, out); break;
      case ExperimentMode::kEvaluate: RunEvaluate(config, model, out); break;
      case ExperimentMode::kLearn: RunLearn(config, model, out); break;
    }
    return kExitOk;
  } catch (const ConfigError& e) {
    log << "error: " << e.what() << "\n";
    return kExitUserError;
  } catch (const ModelError& e) {
    log << "model error: " << e.what() << "\n";
    return kExitUserError;
  } catch (const CapacityError& e) {
    log << "capacity error: " << e.what() << "\n";
    return kExitUserError;
  } catch (const nlohmann::json::exception& e) {
    log << "error: " << e.what() << "\n";
    return kExitUserError;
  } catch (const std::exception& e) {
    log << "internal error: " << e.what() << "\n";
    return kExitInternalError;
  }
}

}  // namespace posgci
