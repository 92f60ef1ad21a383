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

#include <cstddef>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "opkrylov/analysis.hpp"
#include "opkrylov/config.hpp"
#include "opkrylov/dynamics.hpp"
#include "opkrylov/krylov.hpp"
#include "opkrylov/liouville.hpp"
#include "opkrylov/spin_algebra.hpp"

namespace opkrylov {

using Logger = std::function<void(const std::string&)>;

/// Operators on the space the iteration runs in (a sector when one is set).
struct ModelSetup {
  SpinOperator hamiltonian;
  std::vector<SpinOperator> jumps;
  /// Frobenius-normalized seed operator.
  SpinOperator seed;
  std::optional<SectorBasis> sector;
  /// Full-space operators, kept for sector leakage checks.
  SpinOperator full_hamiltonian;
  std::vector<SpinOperator> full_jumps;
};

ModelSetup build_model(const ExperimentConfig& config);

/// Bytes for the superoperator pair plus basis storage, before anything heavy is built.
std::size_t estimate_memory(const ExperimentConfig& config, const ModelSetup& model);

/// Largest relative norm of the part of L_o X that leaves the sector, over the given
/// sector-space vectors X (full space Lindbladian applied to the embedded operator).
double sector_leakage(const ModelSetup& model, const DenseMatrix& sector_vectors);

struct RunTimings {
  double build = 0.0;
  double iterate = 0.0;
  double evolve = 0.0;
  double analyze = 0.0;
};

struct RunResult {
  ExperimentConfig config;
  Index operator_dim = 0;
  Index super_dim = 0;
  Index nonzeros = 0;
  TridiagonalData tridiagonal;
  KrylovBases bases;
  std::optional<EffectiveTridiagonal> effective;
  std::string effective_error;
  /// Set when the amplitude equations could not be integrated; trajectory stays empty.
  std::string evolve_error;
  Trajectory trajectory;
  std::optional<SlopeFit> slope;
  std::vector<double> smoothed_b;
  OutlierResult outliers;
  std::optional<StabilityReport> stability;
  double saturation = 0.0;
  double peak = 0.0;
  double peak_time = 0.0;
  /// max over the grid of (P[i] - P[i-1]) / P[i-1]; <= 0 for a monotone decay.
  double max_probability_increase = 0.0;
  std::optional<double> leakage;
  std::vector<SupportProfile> profiles;
  std::optional<WallSteps> wall;
  /// Kept only when the config asks for a superoperator export.
  std::shared_ptr<const SuperOperator> generator;
  RunTimings timings;
};

struct RunOptions {
  /// Diagonalize the tridiagonal generator (cost grows as K^3).
  bool spectrum_check = true;
  Logger log;
};

/// build model -> Lindbladian -> bi-Lanczos -> evolve -> analyze.
RunResult run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

nlohmann::json run_manifest(const RunResult& result);
nlohmann::json run_fits(const RunResult& result);

/// coefficients.csv, trajectory.csv, fits.json, run-manifest.json (+ optional extras).
void write_artifacts(const RunResult& result, const std::filesystem::path& dir);

struct BatchItem {
  ExperimentConfig config;
  std::optional<RunResult> result;
  std::string error;
};

/// Runs configs on up to `workers` threads. Results keep the input order.
std::vector<BatchItem> run_batch(const std::vector<ExperimentConfig>& configs, int workers,
                                 const RunOptions& options = {});

/// One config per value with `axis` overridden; throws for non-scalar axes.
std::vector<ExperimentConfig> sweep_configs(const ExperimentConfig& base, const std::string& axis,
                                            const std::vector<std::string>& values);

/// Consolidated comparison rows: value, K, termination, eta, saturation, peak, ...
std::string sweep_summary_csv(const std::string& axis, const std::vector<std::string>& values,
                              const std::vector<BatchItem>& items);

std::vector<std::string> preset_names();
std::vector<ExperimentConfig> preset_configs(const std::string& name);

/// Preset-specific consolidated output (eta table for table1, ...), as JSON.
nlohmann::json preset_summary(const std::string& name, const std::vector<BatchItem>& items);

/// First time at which P has dropped by at least `drop`; nullopt if never.
std::optional<double> decay_onset(const Trajectory& traj, double drop = 1e-3);

/// First n with |a_n| above the threshold; nullopt if none.
std::optional<Index> diagonal_onset(const TridiagonalData& t, double threshold = 1e-8);

struct OracleComparison {
  Index krylov_dim = 0;
  double sup_diff_P = 0.0;
  double sup_diff_K_o = 0.0;
  Trajectory fast;
  Trajectory direct;
};

/// evolve against direct_evolution_oracle on the config's grid. Small systems only.
OracleComparison oracle_comparison(const ExperimentConfig& config);

const char* library_version();

}  // namespace opkrylov
