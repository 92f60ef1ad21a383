// Copyright 2026 The opkrylov Authors
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

// opkrylov command line runner.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "opkrylov/experiment.hpp"
#include "opkrylov/io.hpp"

namespace fs = std::filesystem;
using namespace opkrylov;

namespace {

struct Flags {
  std::string out = "opkrylov-out";
  int workers = 1;
  bool store_bases = false;
  bool no_reorth = false;
  bool quiet = false;
};

// A run-manifest.json is accepted wherever a config file is, so a manifest
// can be replayed directly.
ExperimentConfig read_config(const std::string& path) {
  if (fs::path(path).extension() == ".json") {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open " + path);
    const nlohmann::json doc = nlohmann::json::parse(in);
    const nlohmann::json& values = doc.contains("config") ? doc.at("config") : doc;
    ExperimentConfig config;
    for (const auto& [key, value] : values.items()) {
      set_config_value(config, key, value.is_string() ? value.get<std::string>() : value.dump());
    }
    validate(config);
    return config;
  }
  return load_config(path);
}

void apply_flags(ExperimentConfig& config, const Flags& flags) {
  if (flags.store_bases) config.iteration.store_bases = true;
  if (flags.no_reorth) config.iteration.reorth = Reorthogonalization::None;
}

RunOptions run_options(const Flags& flags) {
  RunOptions options;
  if (!flags.quiet) options.log = [](const std::string& line) { std::cerr << line << '\n'; };
  return options;
}

int write_batch(const std::vector<BatchItem>& items, const fs::path& root) {
  int failures = 0;
  for (const BatchItem& item : items) {
    if (item.result) {
      write_artifacts(*item.result, root / item.config.name);
    } else {
      ++failures;
      std::cerr << item.config.name << ": " << item.error << '\n';
    }
  }
  return failures;
}

int cmd_run(const std::string& config_path, const Flags& flags) {
  ExperimentConfig config = read_config(config_path);
  apply_flags(config, flags);
  const RunResult result = run_experiment(config, run_options(flags));
  write_artifacts(result, flags.out);
  std::cout << config.name << ": K = " << result.tridiagonal.krylov_dim() << " ("
            << termination_label(result.tridiagonal.termination) << "), artifacts in "
            << flags.out << '\n';
  return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& axis,
              const std::vector<std::string>& values, const Flags& flags) {
  ExperimentConfig base = read_config(config_path);
  apply_flags(base, flags);
  const std::vector<ExperimentConfig> configs = sweep_configs(base, axis, values);
  const std::vector<BatchItem> items = run_batch(configs, flags.workers, run_options(flags));
  const fs::path root = flags.out;
  fs::create_directories(root);
  const int failures = write_batch(items, root);
  write_text(root / "sweep-summary.csv", sweep_summary_csv(axis, values, items));
  nlohmann::json base_values = nlohmann::json::object();
  for (const auto& [key, value] : config_values(base)) base_values[key] = value;
  write_json(root / "sweep-manifest.json",
             {{"axis", axis}, {"values", values}, {"base", base_values},
              {"opkrylov", library_version()}});
  std::cout << items.size() - failures << " of " << items.size() << " runs written to " << root
            << '\n';
  return failures == 0 ? 0 : 1;
}

int cmd_preset(const std::string& name, const Flags& flags) {
  std::vector<ExperimentConfig> configs = preset_configs(name);
  for (ExperimentConfig& c : configs) apply_flags(c, flags);
  const std::vector<BatchItem> items = run_batch(configs, flags.workers, run_options(flags));
  const fs::path root = fs::path(flags.out) / name;
  fs::create_directories(root);
  const int failures = write_batch(items, root);
  write_json(root / "summary.json", preset_summary(name, items));
  std::cout << name << ": " << items.size() - failures << " of " << items.size()
            << " runs written to " << root << '\n';
  return failures == 0 ? 0 : 1;
}

int cmd_oracle(const std::string& config_path, double tolerance, const Flags& flags) {
  const ExperimentConfig config = read_config(config_path);
  const OracleComparison cmp = oracle_comparison(config);
  const double dp = cmp.sup_diff_P;
  const double dk = cmp.sup_diff_K_o;
  const bool pass = dp <= tolerance && dk <= tolerance;
  fs::create_directories(flags.out);
  write_json(fs::path(flags.out) / "oracle.json",
             {{"name", config.name},
              {"krylov_dim", cmp.krylov_dim},
              {"sup_diff_P", dp},
              {"sup_diff_K_o", dk},
              {"tolerance", tolerance},
              {"pass", pass}});
  std::cout << config.name << ": K = " << cmp.krylov_dim << ", sup|dP| = " << dp
            << ", sup|dK_o| = " << dk << (pass ? "  ok" : "  MISMATCH") << '\n';
  return pass ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Krylov operator growth in dissipative spin chains"};
  app.set_version_flag("--version", std::string(library_version()));
  app.require_subcommand(1);

  Flags flags;
  app.add_option("--out", flags.out, "output directory")->capture_default_str();
  app.add_option("--workers", flags.workers, "concurrent runs")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_flag("--store-bases", flags.store_bases, "keep the Krylov bases in memory");
  app.add_flag("--no-reorth", flags.no_reorth, "skip reorthogonalization (not for acceptance)");
  app.add_flag("-q,--quiet", flags.quiet, "no progress lines");

  std::string config_path;
  auto* run = app.add_subcommand("run", "single experiment");
  run->add_option("--config", config_path, "config file or run manifest")->required();

  std::string sweep_config;
  std::string axis;
  std::vector<std::string> values;
  auto* sweep = app.add_subcommand("sweep", "one run per value of a scalar field");
  sweep->add_option("--config", sweep_config)->required();
  sweep->add_option("--axis", axis)->required();
  sweep->add_option("--values", values)->delimiter(',')->expected(0, -1);

  std::string preset_name;
  auto* preset = app.add_subcommand("preset", "built-in reproduction runs");
  preset->add_option("name", preset_name)->required()->check(CLI::IsMember(preset_names()));

  std::string oracle_config;
  double tolerance = 1e-6;
  auto* oracle = app.add_subcommand("oracle-check", "compare with direct exponentiation");
  oracle->add_option("--config", oracle_config)->required();
  oracle->add_option("--tolerance", tolerance)->capture_default_str();

  // flags are accepted before or after the subcommand
  for (CLI::App* sub : {run, sweep, preset, oracle}) sub->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(config_path, flags);
    if (*sweep) return cmd_sweep(sweep_config, axis, values, flags);
    if (*preset) return cmd_preset(preset_name, flags);
    if (*oracle) return cmd_oracle(oracle_config, tolerance, flags);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
