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

#include "opkrylov/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <Eigen/Core>
#include <boost/version.hpp>

#include "opkrylov/io.hpp"

#ifndef OPKRYLOV_VERSION
#define OPKRYLOV_VERSION "0.0.0"
#endif

namespace opkrylov {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void log_line(const RunOptions& options, const std::string& text) {
  if (options.log) options.log(text);
}

SpinOperator xxz_with_defect(const ExperimentConfig& c) {
  SpinOperator h = build_xxz_hamiltonian(c.num_sites, c.J, c.Jzz, 0.0, 1);
  if (c.epsilon == 0.0) return h;
  const int n = c.num_sites;
  // epsilon S^z_d = (epsilon / 2) sigma^z_d
  if (c.defect_site > 0) {
    return h + build_pauli_operator(
                   PauliString::single(n, c.defect_site, PauliAxis::Z, 0.5 * c.epsilon));
  }
  if (n % 2 == 1) {
    return h + build_pauli_operator(
                   PauliString::single(n, (n + 1) / 2, PauliAxis::Z, 0.5 * c.epsilon));
  }
  return h +
         build_pauli_operator(PauliString::single(n, n / 2, PauliAxis::Z, 0.25 * c.epsilon)) +
         build_pauli_operator(PauliString::single(n, n / 2 + 1, PauliAxis::Z, 0.25 * c.epsilon));
}

Index basis_columns(const ExperimentConfig& c, Index super_dim, Index operator_dim, bool closed) {
  Index bound = closed ? krylov_dimension_bound(operator_dim) : super_dim;
  bound = std::min(bound, super_dim);
  return c.iteration.max_steps > 0 ? std::min(c.iteration.max_steps, bound) : bound;
}

std::vector<double> column_profile(const SupportProfile& p) { return p.weights; }

}  // namespace

const char* library_version() { return OPKRYLOV_VERSION; }

ModelSetup build_model(const ExperimentConfig& config) {
  validate(config);
  ModelSetup model;
  const int n = config.num_sites;
  if (config.model == ModelKind::Tfim) {
    model.full_hamiltonian = build_tfim_hamiltonian(n, config.g, config.h);
    model.full_jumps = build_tfim_jump_operators(n, config.alpha, config.gamma);
  } else {
    model.full_hamiltonian = xxz_with_defect(config);
    const JumpForm form = config.jump_form.value_or(config.sector ? JumpForm::ReflectionSymmetric
                                                                  : JumpForm::AsWritten);
    model.full_jumps = build_xxz_jump_operators(n, config.alpha, config.gamma, form);
  }
  SpinOperator seed = parse_operator_spec(effective_seed(config), n);

  if (config.sector) {
    SectorBasis basis = build_sector_basis(n, config.sector->spin(), config.sector->parity);
    if (basis.empty()) throw DomainError("requested symmetry sector is empty");
    model.hamiltonian = project_to_sector(model.full_hamiltonian, basis);
    for (const SpinOperator& jump : model.full_jumps) {
      model.jumps.push_back(project_to_sector(jump, basis));
    }
    seed = project_to_sector(seed, basis);
    model.sector = std::move(basis);
  } else {
    model.hamiltonian = model.full_hamiltonian;
    model.jumps = model.full_jumps;
  }
  if (frobenius_norm(seed) <= 1e-12) {
    throw DomainError("initial operator vanishes on the operative space");
  }
  model.seed = normalized(seed);
  return model;
}

std::size_t estimate_memory(const ExperimentConfig& config, const ModelSetup& model) {
  const auto dim = static_cast<std::size_t>(model.hamiltonian.dimension());
  const std::size_t super_dim = dim * dim;
  std::size_t nnz = 2 * dim * static_cast<std::size_t>(model.hamiltonian.matrix.nonZeros());
  for (const SpinOperator& jump : model.jumps) {
    const auto j = static_cast<std::size_t>(jump.matrix.nonZeros());
    nnz += j * j + 2 * dim * j;
  }
  nnz = std::min(nnz, super_dim * super_dim);
  // forward + adjoint, value + column index, plus row pointers
  const std::size_t superop = 2 * (nnz * (sizeof(Complex) + sizeof(int)) + super_dim * sizeof(int));
  const Index columns = basis_columns(config, static_cast<Index>(super_dim),
                                      static_cast<Index>(dim), model.jumps.empty());
  const bool keep = config.iteration.reorth == Reorthogonalization::Full ||
                    config.iteration.store_bases || config.support_profiles ||
                    model.sector.has_value();
  const std::size_t bases = keep ? basis_memory_estimate(static_cast<Index>(super_dim), columns) : 0;
  return superop + bases;
}

double sector_leakage(const ModelSetup& model, const DenseMatrix& sector_vectors) {
  if (!model.sector) throw DomainError("leakage is only defined for sector runs");
  const SparseMatrix& b = model.sector->vectors;
  const Index ds = b.cols();
  const SparseMatrix& h = model.full_hamiltonian.matrix;
  double worst = 0.0;
  for (Index col = 0; col < sector_vectors.cols(); ++col) {
    const Eigen::Map<const DenseMatrix> x_sector(sector_vectors.col(col).data(), ds, ds);
    const DenseMatrix x = b * (x_sector * b.adjoint());
    DenseMatrix y = h * x - x * h;
    for (const SpinOperator& jump : model.full_jumps) {
      const SparseMatrix& l = jump.matrix;
      const SparseMatrix l_dag = l.adjoint();
      const SparseMatrix decay = l_dag * l;
      y -= kI * (DenseMatrix(l_dag * x) * l - 0.5 * (decay * x + DenseMatrix(x * decay)));
    }
    const DenseMatrix inside = b * (DenseMatrix(b.adjoint() * y) * b) * b.adjoint();
    const double norm = y.norm();
    if (norm > 0.0) worst = std::max(worst, (y - inside).norm() / norm);
  }
  return worst;
}

RunResult run_experiment(const ExperimentConfig& config, const RunOptions& options) {
  RunResult result;
  result.config = config;
  auto start = Clock::now();

  const ModelSetup model = build_model(config);
  const std::size_t need = estimate_memory(config, model);
  if (need > config.iteration.memory_cap_bytes) {
    throw ResourceError("run '" + config.name + "' needs an estimated " +
                        std::to_string(need >> 20) + " MiB, above the cap of " +
                        std::to_string(config.iteration.memory_cap_bytes >> 20) + " MiB");
  }
  auto generator = std::make_shared<SuperOperator>(
      model.jumps.empty() ? build_liouvillian(model.hamiltonian)
                          : build_lindbladian(model.hamiltonian, model.jumps));
  SuperVector seed = vectorize(model.seed);
  seed /= seed.norm();
  result.operator_dim = model.hamiltonian.dimension();
  result.super_dim = generator->dimension();
  result.nonzeros = generator->nonzeros();
  result.timings.build = seconds_since(start);
  log_line(options, config.name + ": operator space " + std::to_string(result.super_dim) +
                        ", nnz " + std::to_string(result.nonzeros));

  start = Clock::now();
  IterationOptions iteration = config.iteration;
  const bool want_profiles = config.support_profiles && !model.sector;
  iteration.store_bases = iteration.store_bases || want_profiles || model.sector.has_value();
  KrylovResult krylov = bilanczos(*generator, seed, iteration);
  result.tridiagonal = std::move(krylov.data);
  result.timings.iterate = seconds_since(start);
  log_line(options, config.name + ": K = " + std::to_string(result.tridiagonal.krylov_dim()) +
                        " (" + termination_label(result.tridiagonal.termination) + ") in " +
                        std::to_string(result.timings.iterate) + " s");

  start = Clock::now();
  try {
    result.effective = effective_tridiagonal(result.tridiagonal);
  } catch (const DomainError& e) {
    result.effective_error = e.what();
    log_line(options, config.name + ": effective reduction failed: " + e.what());
  }
  if (result.effective) {
    const std::vector<double> grid =
        default_time_grid(config.grid_points, config.t_max, config.linear_end, config.linear_points);
    try {
      result.trajectory = evolve(*result.effective, grid, config.integrator);
    } catch (const IntegrationError& e) {
      result.evolve_error = e.what();
      log_line(options, config.name + ": evolution failed: " + e.what());
    }
  }
  result.timings.evolve = seconds_since(start);

  start = Clock::now();
  std::vector<double> abs_a;
  for (const Complex& a : result.tridiagonal.a) abs_a.push_back(std::abs(a));
  if (abs_a.size() >= 2 * kPlateauWindow) {
    try {
      result.slope = fit_diagonal_slope(abs_a);
    } catch (const DomainError&) {
      result.slope.reset();
    }
  }
  std::vector<double> abs_b;
  for (const Complex& b : result.tridiagonal.b) abs_b.push_back(std::abs(b));
  if (!abs_b.empty()) {
    Index window = std::min<Index>(config.smoothing_window, static_cast<Index>(abs_b.size()));
    if (window % 2 == 0) --window;
    result.smoothed_b = smooth_descent(abs_b, window);
    result.outliers = filter_outliers(abs_b, config.outlier_multiplier);
  }
  if (options.spectrum_check) {
    result.stability = tridiagonal_spectrum_check(result.tridiagonal);
  }
  const Trajectory& traj = result.trajectory;
  if (traj.size() > 1) {
    result.saturation = saturation_value(traj.t, traj.K_o, config.saturation_window);
    for (Index i = 0; i < traj.size(); ++i) {
      if (!std::isnan(traj.K_o[i]) && traj.K_o[i] > result.peak) {
        result.peak = traj.K_o[i];
        result.peak_time = traj.t[i];
      }
    }
    result.max_probability_increase = -std::numeric_limits<double>::infinity();
    for (Index i = 1; i < traj.size(); ++i) {
      if (!(traj.P[i - 1] > 0.0)) break;
      result.max_probability_increase =
          std::max(result.max_probability_increase, (traj.P[i] - traj.P[i - 1]) / traj.P[i - 1]);
    }
  }
  if (model.sector) {
    const Index count = std::min<Index>(16, krylov.bases.P.cols());
    result.leakage = sector_leakage(model, krylov.bases.P.leftCols(count));
  }
  if (want_profiles) {
    for (Index n = 0; n < krylov.bases.P.cols(); ++n) {
      result.profiles.push_back(support_profile(krylov.bases.P.col(n), config.num_sites));
    }
    result.wall = detect_wall_steps(result.profiles);
  }
  if (config.iteration.store_bases) result.bases = std::move(krylov.bases);
  if (config.export_superoperator) result.generator = generator;
  result.timings.analyze = seconds_since(start);
  return result;
}

nlohmann::json run_fits(const RunResult& r) {
  nlohmann::json out;
  if (r.slope) out["slope"] = to_json(*r.slope);
  out["saturation_K_o"] = r.saturation;
  out["peak_K_o"] = r.peak;
  out["peak_time"] = r.peak_time;
  out["max_probability_increase"] = r.max_probability_increase;
  if (!r.trajectory.P.empty()) out["final_probability"] = r.trajectory.P.back();
  out["outliers_removed"] = r.outliers.removed.size();
  if (r.stability) out["stability"] = to_json(*r.stability);
  if (r.leakage) out["sector_leakage"] = *r.leakage;
  if (r.wall) {
    out["wall_n1"] = r.wall->n1 ? nlohmann::json(*r.wall->n1) : nlohmann::json(nullptr);
    out["wall_n2"] = r.wall->n2 ? nlohmann::json(*r.wall->n2) : nlohmann::json(nullptr);
  }
  if (const auto onset = diagonal_onset(r.tridiagonal)) out["diagonal_onset"] = *onset;
  if (const auto onset = decay_onset(r.trajectory)) out["decay_onset"] = *onset;
  if (r.effective) {
    double phase = 0.0;
    for (double v : r.effective->phase_residual) phase = std::max(phase, v);
    out["effective"] = {{"negative_diagonals", r.effective->negative_diagonals},
                        {"max_phase_residual", phase}};
  } else {
    out["effective_error"] = r.effective_error;
  }
  if (!r.evolve_error.empty()) out["evolve_error"] = r.evolve_error;
  return out;
}

nlohmann::json run_manifest(const RunResult& r) {
  const IterationDiagnostics& d = r.tridiagonal.diagnostics;
  nlohmann::json config = nlohmann::json::object();
  for (const auto& [key, value] : config_values(r.config)) config[key] = value;
  return {
      {"config", config},
      {"versions",
       {{"opkrylov", library_version()},
        {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                      "." + std::to_string(EIGEN_MINOR_VERSION)},
        {"boost", std::to_string(BOOST_VERSION / 100000) + "." +
                      std::to_string(BOOST_VERSION / 100 % 1000)},
        {"compiler", __VERSION__}}},
      {"tolerances",
       {{"breakdown_tol", r.config.iteration.breakdown_tol},
        {"reorth_failure", r.config.iteration.reorth_failure},
        {"phase_tolerance", 1e-8},
        {"rel_tol", r.config.integrator.rel_tol},
        {"abs_tol", r.config.integrator.abs_tol},
        {"saturation_window", r.config.saturation_window}}},
      {"operator_dimension", r.operator_dim},
      {"superoperator_dimension", r.super_dim},
      {"superoperator_nonzeros", r.nonzeros},
      {"krylov_dim", r.tridiagonal.krylov_dim()},
      {"termination_reason", termination_label(r.tridiagonal.termination)},
      {"diagnostics",
       {{"serious_breakdown", d.serious_breakdown},
        {"negative_omega_steps", d.negative_omega_steps},
        {"max_norm_product", d.max_norm_product},
        {"max_step_defect", d.max_step_defect},
        {"parity_projection", d.parity_projection},
        {"trace_projection", d.trace_projection},
        {"final_residual_r", d.final_residual_r},
        {"final_residual_s", d.final_residual_s}}},
      {"timings_seconds",
       {{"build", r.timings.build},
        {"iterate", r.timings.iterate},
        {"evolve", r.timings.evolve},
        {"analyze", r.timings.analyze}}},
  };
}

void write_artifacts(const RunResult& r, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  Metadata meta;
  for (const auto& [key, value] : config_values(r.config)) meta[key] = value;
  {
    std::ofstream out(dir / "coefficients.csv");
    write_coefficients_csv(out, r.tridiagonal, meta);
  }
  {
    std::ofstream out(dir / "trajectory.csv");
    write_trajectory_csv(out, r.trajectory);
  }
  if (r.config.integrator.store_amplitudes && r.trajectory.phi.size() > 0) {
    std::ofstream out(dir / "amplitudes.csv");
    write_amplitudes_csv(out, r.trajectory);
  }
  if (!r.profiles.empty()) {
    std::ostringstream os;
    os.precision(17);
    os << "n";
    for (int s = 0; s <= r.config.num_sites; ++s) os << ",w" << s;
    os << '\n';
    for (std::size_t n = 0; n < r.profiles.size(); ++n) {
      os << n;
      for (double w : column_profile(r.profiles[n])) os << ',' << w;
      os << '\n';
    }
    write_text(dir / "support.csv", os.str());
  }
  if (r.generator) {
    std::ofstream out(dir / "superoperator.txt");
    write_triplets(out, *r.generator);
  }
  write_json(dir / "fits.json", run_fits(r));
  write_json(dir / "run-manifest.json", run_manifest(r));
}

std::vector<BatchItem> run_batch(const std::vector<ExperimentConfig>& configs, int workers,
                                 const RunOptions& options) {
  std::vector<BatchItem> items(configs.size());
  for (std::size_t i = 0; i < configs.size(); ++i) items[i].config = configs[i];
  std::mutex log_mutex;
  RunOptions local = options;
  if (options.log) {
    local.log = [&](const std::string& line) {
      std::lock_guard<std::mutex> lock(log_mutex);
      options.log(line);
    };
  }
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < items.size(); i = next++) {
      try {
        items[i].result = run_experiment(items[i].config, local);
      } catch (const std::exception& e) {
        items[i].error = e.what();
        if (local.log) local.log(items[i].config.name + ": failed: " + e.what());
      }
    }
  };
  const int count = std::max(1, std::min<int>(workers, static_cast<int>(items.size())));
  if (count == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < count; ++w) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
  }
  return items;
}

std::vector<ExperimentConfig> sweep_configs(const ExperimentConfig& base, const std::string& axis,
                                            const std::vector<std::string>& values) {
  if (!is_scalar_key(axis)) throw DomainError("sweep axis '" + axis + "' is not a scalar field");
  std::vector<ExperimentConfig> out;
  for (const std::string& value : values) {
    ExperimentConfig c = base;
    set_config_value(c, axis, value);
    c.name = base.name + "_" + axis + "=" + value;
    validate(c);
    out.push_back(std::move(c));
  }
  return out;
}

std::string sweep_summary_csv(const std::string& axis, const std::vector<std::string>& values,
                              const std::vector<BatchItem>& items) {
  std::ostringstream os;
  os.precision(17);
  os << axis << ",name,K,termination,eta,r_squared,saturation,peak,peak_time,final_P,error\n";
  for (std::size_t i = 0; i < items.size(); ++i) {
    const BatchItem& item = items[i];
    os << (i < values.size() ? values[i] : "") << ',' << item.config.name << ',';
    if (!item.result) {
      os << ",,,,,,,," << '"' << item.error << '"' << '\n';
      continue;
    }
    const RunResult& r = *item.result;
    os << r.tridiagonal.krylov_dim() << ',' << termination_label(r.tridiagonal.termination) << ',';
    if (r.slope) {
      os << r.slope->eta << ',' << r.slope->r_squared;
    } else {
      os << ',';
    }
    os << ',' << r.saturation << ',' << r.peak << ',' << r.peak_time << ',';
    if (!r.trajectory.P.empty()) os << r.trajectory.P.back();
    os << ",\n";
  }
  return os.str();
}

namespace {

ExperimentConfig tfim(const std::string& name, bool chaotic, double alpha, double gamma,
                      int sites = 6) {
  ExperimentConfig c;
  c.name = name;
  c.model = ModelKind::Tfim;
  c.num_sites = sites;
  c.g = chaotic ? -1.05 : 1.0;
  c.h = chaotic ? 0.5 : 0.0;
  c.alpha = alpha;
  c.gamma = gamma;
  return c;
}

std::string rate_label(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"fig1-closed-tfim", "table1", "fig3", "fig4", "xxz-desk", "finite-size"};
}

std::vector<ExperimentConfig> preset_configs(const std::string& name) {
  std::vector<ExperimentConfig> out;
  const double rates[] = {0.01, 0.05, 0.10, 0.15};
  if (name == "fig1-closed-tfim") {
    out.push_back(tfim("int", false, 0.0, 0.0));
    out.push_back(tfim("chaos", true, 0.0, 0.0));
  } else if (name == "table1") {
    for (bool chaotic : {false, true}) {
      const std::string m = chaotic ? "chaos" : "int";
      for (double g : rates) out.push_back(tfim(m + "_a0_g" + rate_label(g), chaotic, 0.0, g));
      for (double a : rates) out.push_back(tfim(m + "_a" + rate_label(a) + "_g0", chaotic, a, 0.0));
    }
  } else if (name == "fig3") {
    for (double a : {0.01, 0.1}) {
      for (bool chaotic : {false, true}) {
        out.push_back(tfim(std::string(chaotic ? "chaos" : "int") + "_a" + rate_label(a) + "_g0.01",
                           chaotic, a, 0.01));
      }
    }
  } else if (name == "fig4") {
    for (double g : {0.0, 0.01, 0.05}) {
      for (bool chaotic : {false, true}) {
        out.push_back(tfim(std::string(chaotic ? "chaos" : "int") + "_a0.05_g" + rate_label(g),
                           chaotic, 0.05, g));
      }
    }
  } else if (name == "xxz-desk") {
    for (double a : {0.01, 0.05}) {
      for (double eps : {0.0, 0.5}) {
        ExperimentConfig c;
        c.name = "xxz_eps" + rate_label(eps) + "_a" + rate_label(a) + "_g0.01";
        c.model = ModelKind::Xxz;
        c.num_sites = 8;
        c.J = 1.0;
        c.Jzz = 0.5;
        c.epsilon = eps;
        c.alpha = a;
        c.gamma = 0.01;
        c.sector = SectorLabel{2, 1};
        c.seed = "z2+z7";
        out.push_back(c);
      }
    }
  } else if (name == "finite-size") {
    for (bool chaotic : {false, true}) {
      for (int n : {4, 6, 8}) {
        ExperimentConfig c = tfim(std::string(chaotic ? "chaos" : "int") + "_N" + std::to_string(n),
                                  chaotic, 0.1, 0.0, n);
        if (n == 8) c.iteration.max_steps = 200;
        if (n == 6) c.support_profiles = true;
        out.push_back(c);
      }
    }
    ExperimentConfig w3 = tfim("int_N6_weight3", false, 0.1, 0.0);
    w3.seed = "z2*z3*z4";
    out.push_back(w3);
  } else {
    throw DomainError("unknown preset '" + name + "'");
  }
  for (ExperimentConfig& c : out) validate(c);
  return out;
}

nlohmann::json preset_summary(const std::string& name, const std::vector<BatchItem>& items) {
  nlohmann::json runs = nlohmann::json::array();
  for (const BatchItem& item : items) {
    nlohmann::json row = {{"name", item.config.name},
                          {"alpha", item.config.alpha},
                          {"gamma", item.config.gamma}};
    if (!item.result) {
      row["error"] = item.error;
    } else {
      const RunResult& r = *item.result;
      row["krylov_dim"] = r.tridiagonal.krylov_dim();
      row["fits"] = run_fits(r);
    }
    runs.push_back(row);
  }
  nlohmann::json out = {{"preset", name}, {"runs", runs}};
  if (name == "table1") {
    nlohmann::json models = nlohmann::json::object();
    for (const std::string m : {"int", "chaos"}) {
      for (const bool vary_gamma : {true, false}) {
        std::vector<EtaPoint> points;
        for (const BatchItem& item : items) {
          if (!item.result || !item.result->slope) continue;
          if (item.config.name.rfind(m + "_", 0) != 0) continue;
          const bool gamma_run = item.config.alpha == 0.0;
          if (gamma_run != vary_gamma) continue;
          points.push_back({item.config.alpha, item.config.gamma, item.result->slope->eta});
        }
        if (points.size() >= 3) {
          models[m + (vary_gamma ? "_gamma" : "_alpha")] = to_json(fit_eta_model(points));
        }
      }
    }
    out["eta_models"] = models;
  }
  return out;
}

namespace {

double sup_difference(const std::vector<double>& a, const std::vector<double>& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
    if (std::isnan(a[i]) && std::isnan(b[i])) continue;
    worst = std::max(worst, std::abs(a[i] - b[i]));
  }
  return worst;
}

}  // namespace

OracleComparison oracle_comparison(const ExperimentConfig& config) {
  const ModelSetup model = build_model(config);
  const SuperOperator generator = model.jumps.empty()
                                      ? build_liouvillian(model.hamiltonian)
                                      : build_lindbladian(model.hamiltonian, model.jumps);
  if (generator.dimension() > kOracleGuard) {
    throw ResourceError("oracle comparison needs D^2 <= " + std::to_string(kOracleGuard) +
                        ", got " + std::to_string(generator.dimension()));
  }
  SuperVector seed = vectorize(model.seed);
  seed /= seed.norm();
  IterationOptions iteration = config.iteration;
  iteration.store_bases = true;
  const KrylovResult krylov = bilanczos(generator, seed, iteration);
  const EffectiveTridiagonal eff = effective_tridiagonal(krylov.data);
  const std::vector<double> grid =
      default_time_grid(config.grid_points, config.t_max, config.linear_end, config.linear_points);
  OracleComparison out;
  out.krylov_dim = krylov.data.krylov_dim();
  out.fast = evolve(eff, grid, config.integrator);
  out.direct = direct_evolution_oracle(generator, seed, krylov.bases, grid);
  out.sup_diff_P = sup_difference(out.fast.P, out.direct.P);
  out.sup_diff_K_o = sup_difference(out.fast.K_o, out.direct.K_o);
  return out;
}

std::optional<double> decay_onset(const Trajectory& traj, double drop) {
  for (Index i = 0; i < traj.size(); ++i) {
    if (traj.P[i] <= 1.0 - drop) return traj.t[i];
  }
  return std::nullopt;
}

std::optional<Index> diagonal_onset(const TridiagonalData& t, double threshold) {
  for (Index n = 0; n < t.krylov_dim(); ++n) {
    if (std::abs(t.a[n]) > threshold) return n;
  }
  return std::nullopt;
}

}  // namespace opkrylov
