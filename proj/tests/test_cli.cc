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

// Config parsing and end-to-end runs of the posgci binary.

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "posgci/experiment.h"

namespace posgci {
namespace {

namespace fs = std::filesystem;

fs::path Scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("posgci_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void Spit(const fs::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

int Run(const std::string& args) {
  const std::string cmd =
      std::string(POSGCI_CLI_BINARY) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string ErrorOf(const std::string& text) {
  try {
    parse_config_text(text);
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

const char* kSweep = R"({
  "mode": "sweep-L",
  "instance": {"kind": "random_observable", "horizon": 3, "seed": 1,
               "num_states": 2, "eta": 0.2, "zero_sum": true},
  "pattern": {"name": "one_step_delay"},
  "solver": {"kind": "ne_zerosum", "eps_e": 0.01}
})";

const char* kLearn = R"({
  "mode": "learn",
  "seed": 4,
  "instance": {"kind": "dectiger", "horizon": 2},
  "pattern": {"name": "one_step_delay"},
  "scheme": {"memory": 1},
  "solver": {"kind": "ne_cooperative"},
  "learn": {"n0": 3000, "n2": 500}
})";

TEST_SUITE("cli") {

TEST_CASE("shipped config parses") {
  ExperimentConfig c =
      parse_config(std::string(POSGCI_SOURCE_DIR) + "/configs/dectiger_plan.json");
  CHECK(c.mode == ExperimentMode::kPlan);
  CHECK(c.instance.kind == "dectiger");
  CHECK(c.instance.horizon == 2);
  CHECK(c.memory == 2);
  CHECK(c.kind == SolverKind::kNECooperative);
}

TEST_CASE("semantic and syntax errors") {
  const std::string three = ErrorOf(R"({
    "mode": "plan",
    "instance": {"kind": "random_observable", "horizon": 2,
                 "action_counts": [2, 2, 2], "obs_counts": [2, 2, 2]},
    "pattern": {"name": "one_step_delay"},
    "solver": {"kind": "ne_zerosum"}
  })");
  CHECK(three.find("ne_zerosum") != std::string::npos);

  const std::string missing = ErrorOf(R"({
    "mode": "plan",
    "instance": {"kind": "dectiger"},
    "pattern": {"name": "one_step_delay"}
  })");
  CHECK(missing.find("horizon") != std::string::npos);

  const std::string unknown = ErrorOf(R"({
    "mode": "plan",
    "instance": {"kind": "dectiger", "horizon": 2},
    "pattern": {"name": "one_step_delay"},
    "solver": {"kind": "cce", "tolerance": 0.1}
  })");
  CHECK(unknown.find("tolerance") != std::string::npos);
  CHECK(unknown.find("line 5") != std::string::npos);

  CHECK(!ErrorOf("{not json").empty());
}

TEST_CASE("exit codes") {
  fs::path dir = Scratch("exit");
  CHECK(Run("plan --config " + (dir / "absent.json").string()) == 1);
  Spit(dir / "bad_model.json", R"({
    "mode": "plan",
    "instance": {"kind": "file", "horizon": 2, "path": "/nonexistent/model.json"},
    "pattern": {"name": "one_step_delay"}
  })");
  CHECK(Run("plan --config " + (dir / "bad_model.json").string()) == 1);
  CHECK(Run("plan") == 1);
  CHECK(Run("plan --config " + std::string(POSGCI_SOURCE_DIR) +
            "/configs/dectiger_plan.json --threads 0") == 1);
}

TEST_CASE("plan run is certified and byte-identical") {
  fs::path a = Scratch("plan_a"), b = Scratch("plan_b");
  const std::string cfg =
      std::string(POSGCI_SOURCE_DIR) + "/configs/dectiger_plan.json";
  REQUIRE(Run("plan --config " + cfg + " --no-timing --out " + a.string()) == 0);
  REQUIRE(Run("plan --config " + cfg + " --no-timing --out " + b.string()) == 0);
  auto summary = nlohmann::json::parse(Slurp(a / "summary.json"));
  CHECK(summary["gap"].get<double>() <= 0.01);
  CHECK(summary["max_stage_gap"].get<double>() <= 0.01);
  for (const char* f :
       {"summary.json", "plan.csv", "values.csv", "policy.json"}) {
    REQUIRE(fs::exists(a / f));
    CHECK_MESSAGE(Slurp(a / f) == Slurp(b / f), f);
  }

  // The written policy can be evaluated.
  fs::path e = Scratch("evaluate");
  Spit(e / "eval.json", R"({
    "mode": "evaluate",
    "instance": {"kind": "dectiger", "horizon": 2},
    "pattern": {"name": "one_step_delay"},
    "solver": {"kind": "ne_cooperative"},
    "evaluate": {"policy": ")" + (a / "policy.json").string() + R"("}
  })");
  REQUIRE(Run("evaluate --config " + (e / "eval.json").string() + " --out " +
              e.string()) == 0);
  auto ev = nlohmann::json::parse(Slurp(e / "summary.json"));
  CHECK(ev["gap"].get<double>() == doctest::Approx(summary["gap"].get<double>()));
}

TEST_CASE("sweep over memory lengths") {
  fs::path dir = Scratch("sweep");
  Spit(dir / "sweep.json", kSweep);
  REQUIRE(Run("sweep-L --config " + (dir / "sweep.json").string() + " --out " +
              dir.string()) == 0);
  std::istringstream table(Slurp(dir / "sweep.csv"));
  std::string line;
  std::getline(table, line);
  CHECK(line == "L,eps_r,eps_z,gap");
  std::vector<double> eps_z;
  while (std::getline(table, line)) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    REQUIRE(cells.size() == 4);
    eps_z.push_back(std::stod(cells[2]));
  }
  REQUIRE(eps_z.size() == 4);
  for (size_t k = 1; k < eps_z.size(); ++k) {
    CHECK(eps_z[k] <= eps_z[k - 1] + 1e-9);
  }
}

TEST_CASE("learn run does not depend on the thread count") {
  fs::path dir = Scratch("learn");
  Spit(dir / "learn.json", kLearn);
  const std::string cfg = (dir / "learn.json").string();
  REQUIRE(Run("learn --config " + cfg + " --no-timing --threads 1 --out " +
              (dir / "t1").string()) == 0);
  REQUIRE(Run("learn --config " + cfg + " --no-timing --threads 3 --out " +
              (dir / "t3").string()) == 0);
  for (const char* f : {"summary.json", "learn.csv", "policy.json"}) {
    CHECK_MESSAGE(Slurp(dir / "t1" / f) == Slurp(dir / "t3" / f), f);
  }
}

}  // TEST_SUITE

}  // namespace
}  // namespace posgci
