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

#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>

#include "opkrylov/dynamics.hpp"
#include "opkrylov/krylov.hpp"
#include "opkrylov/spin_algebra.hpp"

namespace opkrylov {

enum class ModelKind { Tfim, Xxz };

/// One experiment. Every field has a default and every default is written to the
/// run manifest.
///
/// File grammar: one `key = value` per line; `#` starts a comment; blank lines are
/// ignored; keys are the names listed by config_keys(). Booleans are true/false.
/// Operator specs are sums of products, e.g. `z3`, `z2+z7`, `z2*z3*z4`, with axes
/// x y z p (sigma^+) m (sigma^-) followed by a 1-based site.
struct ExperimentConfig {
  std::string name = "run";
  ModelKind model = ModelKind::Tfim;
  int num_sites = 6;
  // TFIM
  double g = 1.0;
  double h = 0.0;
  // XXZ
  double J = 1.0;
  double Jzz = 1.0;
  double epsilon = 0.0;
  int defect_site = 0;  // 0 picks the middle site
  // dissipation
  double alpha = 0.0;
  double gamma = 0.0;
  std::optional<SectorLabel> sector;  // xxz only
  std::string seed;  // empty: z at site ceil(N/2)
  /// xxz only; a sector forces ReflectionSymmetric.
  std::optional<JumpForm> jump_form;

  IterationOptions iteration;
  // time grid and integrator
  double t_max = 500.0;
  Index grid_points = 2000;
  double linear_end = 1.0;
  Index linear_points = 100;
  IntegratorControls integrator;
  // analysis
  double saturation_window = 0.2;
  Index smoothing_window = 51;
  double outlier_multiplier = 3.0;
  // outputs
  bool support_profiles = false;
  bool export_superoperator = false;
};

const char* model_label(ModelKind kind);

/// Parse `key = value` text; unknown keys and malformed values throw DomainError.
ExperimentConfig parse_config(std::istream& in, ExperimentConfig base = {});
ExperimentConfig load_config(const std::filesystem::path& path);

/// Apply one key. Used by the parser, sweeps and presets.
void set_config_value(ExperimentConfig& config, const std::string& key, const std::string& value);

/// True for keys holding a single number.
bool is_scalar_key(const std::string& key);

/// Every key with its current value, in the file grammar.
std::map<std::string, std::string> config_values(const ExperimentConfig& config);

/// Consistency checks (sector only for xxz, sites in range, ...). Throws DomainError.
void validate(const ExperimentConfig& config);

/// Middle-site sigma^z unless a seed is given.
std::string effective_seed(const ExperimentConfig& config);

/// Build the operator described by an operator spec on the full space.
SpinOperator parse_operator_spec(const std::string& spec, int num_sites);

}  // namespace opkrylov
