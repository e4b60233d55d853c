// Copyright 2026 The Equirank Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "equirank/equirank.hpp"

namespace {

equirank::ExperimentConfig load_config(const std::string& path,
                                        const std::vector<std::string>& overrides) {
  equirank::KeyValues kv = equirank::read_config_file(path);
  for (const auto& assignment : overrides) equirank::apply_override(kv, assignment);
  return equirank::parse_config(kv);
}

int run_command(const std::string& config_path, const std::vector<std::string>& overrides) {
  const auto cfg = load_config(config_path, overrides);
  const auto result = equirank::run_experiment(cfg);
  equirank::write_run_outputs(cfg, result);
  std::cout << "wrote " << result.records.size() << " iterations to " << cfg.output_path
            << '\n';
  return 0;
}

int compare_command(const std::vector<std::string>& config_paths,
                    const std::vector<std::string>& overrides,
                    const std::string& output) {
  std::vector<equirank::ExperimentConfig> configs;
  configs.reserve(config_paths.size());
  for (const auto& path : config_paths) configs.push_back(load_config(path, overrides));
  const auto table = equirank::compare_experiments(configs);
  if (output.empty()) {
    equirank::write_compare_csv(std::cout, table);
  } else {
    std::ofstream out(output, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + output + "'");
    equirank::write_compare_csv(out, table);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Attention amortization experiment runner"};
  app.require_subcommand(1);

  std::string run_config;
  std::vector<std::string> run_overrides;
  auto* run = app.add_subcommand("run", "Run one experiment and write its output CSVs");
  run->add_option("config", run_config, "Experiment config file")->required();
  run->add_option("--set", run_overrides, "Override a config key (key=value, repeatable)");

  std::vector<std::string> compare_configs;
  std::vector<std::string> compare_overrides;
  std::string compare_output;
  auto* compare =
      app.add_subcommand("compare", "Run several experiments and merge unfairness curves");
  compare->add_option("configs", compare_configs, "Experiment config files")->required();
  compare->add_option("--set", compare_overrides,
                      "Override a config key in every config (key=value, repeatable)");
  compare->add_option("--output", compare_output, "Write the merged CSV here (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return run_command(run_config, run_overrides);
    if (compare->parsed()) return compare_command(compare_configs, compare_overrides,
                                                  compare_output);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
