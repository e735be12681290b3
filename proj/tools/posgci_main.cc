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

// posgci {plan|learn|evaluate|sweep-L} --config PATH [--seed N] [--out DIR]
//        [--threads N] [--no-timing]

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "posgci/experiment.h"

int main(int argc, char** argv) {
  CLI::App app{"Common-information planning and learning for POSGs"};
  app.require_subcommand(1, 1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<int> threads;
  bool no_timing = false;

  for (const char* name : {"plan", "learn", "evaluate", "sweep-L"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "experiment config (JSON)")
        ->required();
    sub->add_option("--seed", seed, "overrides the config seed");
    sub->add_option("--out", out, "output directory");
    sub->add_option("--threads", threads, "sampler threads");
    sub->add_flag("--no-timing", no_timing,
                  "write 0 for wall-clock columns (byte-stable outputs)");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : posgci::kExitUserError;
  }
  const std::string mode = app.get_subcommands().front()->get_name();

  posgci::ExperimentConfig config;
  try {
    config = posgci::parse_config(config_path);
  } catch (const posgci::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return posgci::kExitUserError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return posgci::kExitInternalError;
  }
  config.mode = posgci::mode_from_name(mode);
  if (seed) config.seed = *seed;
  if (out) config.out_dir = *out;
  if (threads) {
    if (*threads < 1) {
      std::cerr << "error: --threads must be >= 1\n";
      return posgci::kExitUserError;
    }
    config.threads = *threads;
  }
  if (no_timing) config.record_timing = false;
  if (config.mode == posgci::ExperimentMode::kLearn && !config.memory) {
    std::cerr << "error: learn mode requires scheme.memory\n";
    return posgci::kExitUserError;
  }
  if (config.mode == posgci::ExperimentMode::kEvaluate &&
      config.policy_path.empty()) {
    std::cerr << "error: evaluate mode requires evaluate.policy\n";
    return posgci::kExitUserError;
  }
  const int code = posgci::run_experiment(config, std::cerr);
  if (code == posgci::kExitOk) {
    std::cout << mode << ": wrote " << config.out_dir << "\n";
  }
  return code;
}
