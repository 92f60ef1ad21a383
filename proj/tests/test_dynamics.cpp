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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "opkrylov/dynamics.hpp"
#include "opkrylov/krylov.hpp"
#include "opkrylov/liouville.hpp"
#include "opkrylov/spin_algebra.hpp"

namespace opkrylov {
namespace {

EffectiveTridiagonal make_eff(std::vector<double> a, std::vector<double> b) {
  EffectiveTridiagonal eff;
  eff.abs_a = std::move(a);
  eff.abs_b = b;
  eff.signed_b = b;
  eff.phase_residual.assign(b.size(), 0.0);
  return eff;
}

std::vector<double> linear_grid(double t_max, int points) {
  std::vector<double> t(points);
  for (int i = 0; i < points; ++i) t[i] = t_max * i / (points - 1);
  return t;
}

double sup_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

SuperVector seed_of(const SpinOperator& op) {
  SuperVector v = vectorize(op);
  return v / v.norm();
}

TEST(Evolve, TwoLevelRotation) {
  const double b = 1.3;
  const auto grid = linear_grid(10.0, 401);
  IntegratorControls controls;
  controls.store_amplitudes = true;
  const Trajectory traj = evolve(make_eff({0.0, 0.0}, {b}), grid, controls);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double t = grid[i];
    EXPECT_NEAR(traj.phi(i, 0).real(), std::cos(b * t), 1e-8);
    EXPECT_NEAR(traj.phi(i, 1).real(), std::sin(b * t), 1e-8);
    EXPECT_NEAR(traj.K_o[i], std::sin(b * t) * std::sin(b * t), 1e-8);
    EXPECT_NEAR(traj.P[i], 1.0, 1e-8);
    EXPECT_EQ(traj.K_o[i], traj.K_o[i]);
  }
}

TEST(Evolve, ScalarDecay) {
  const double gamma = 0.05;
  const auto grid = linear_grid(40.0, 201);
  const Trajectory traj = evolve(make_eff({2.0 * gamma}, {}), grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    EXPECT_NEAR(traj.P[i], std::exp(-4.0 * gamma * grid[i]), 1e-8);
    EXPECT_EQ(traj.K_o[i], 0.0);
  }
}

TEST(Evolve, SingleSiteTfimPeriod) {
  const SuperOperator l = build_liouvillian(build_tfim_hamiltonian(1, 1.0, 0.0));
  const KrylovResult r =
      lanczos(l, seed_of(build_pauli_operator(PauliString::single(1, 1, PauliAxis::Z))));
  const EffectiveTridiagonal eff = effective_tridiagonal(r.data);
  const auto grid = linear_grid(std::numbers::pi, 257);
  const Trajectory traj = evolve(eff, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    EXPECT_NEAR(traj.K_o[i], std::pow(std::sin(2.0 * grid[i]), 2), 1e-8);
  }
  EXPECT_NEAR(traj.K_o[128], 0.0, 1e-8);  // t = pi / 2
}

TEST(Evolve, InitialState) {
  const Trajectory traj = evolve(make_eff({0.1, 0.2, 0.3}, {1.0, 2.0}), linear_grid(1.0, 5));
  EXPECT_EQ(traj.P[0], 1.0);
  EXPECT_EQ(traj.K_raw[0], 0.0);
  EXPECT_EQ(traj.K_o[0], 0.0);
}

TEST(Evolve, RejectsBadGrid) {
  const EffectiveTridiagonal eff = make_eff({0.0}, {});
  const std::vector<double> late = {0.5, 1.0};
  const std::vector<double> flat = {0.0, 1.0, 1.0};
  EXPECT_THROW(evolve(eff, late), DomainError);
  EXPECT_THROW(evolve(eff, flat), DomainError);
}

TEST(Evolve, ComplexityBoundsAndMonotoneDecay) {
  const EffectiveTridiagonal eff =
      make_eff({0.0, 0.02, 0.05, 0.08, 0.1, 0.12}, {1.0, 1.4, 1.7, 1.2, 0.9});
  const Trajectory traj = evolve(eff, default_time_grid(400, 200.0, 1.0, 40));
  for (Index i = 0; i < traj.size(); ++i) {
    EXPECT_GE(traj.K_o[i], -1e-12);
    EXPECT_LE(traj.K_o[i], 5.0 + 1e-12);
    if (i > 0) {
      EXPECT_LE(traj.P[i], traj.P[i - 1] * (1.0 + 1e-9));
    }
  }
}

TEST(Evolve, DissipationIdentity) {
  // dP/dt = -2 sum_n Im(a_n) phi_n^2, checked with a five-point stencil
  const EffectiveTridiagonal eff = make_eff({0.0, 0.05, 0.1, 0.2}, {1.0, 1.5, 0.8});
  const auto grid = linear_grid(5.0, 5001);
  IntegratorControls controls;
  controls.store_amplitudes = true;
  const Trajectory traj = evolve(eff, grid, controls);
  const double h = grid[1] - grid[0];
  for (std::size_t i = 2; i + 2 < grid.size(); i += 50) {
    const double fd =
        (traj.P[i - 2] - 8.0 * traj.P[i - 1] + 8.0 * traj.P[i + 1] - traj.P[i + 2]) / (12.0 * h);
    double rhs = 0.0;
    for (Index n = 0; n < 4; ++n) rhs -= 2.0 * eff.abs_a[n] * std::norm(traj.phi(i, n));
    EXPECT_NEAR(fd, rhs, 1e-6 * std::max(1e-3, std::abs(rhs))) << grid[i];
  }
}

TEST(Evolve, ToleranceRefinement) {
  const EffectiveTridiagonal eff = make_eff({0.0, 0.03, 0.06, 0.09}, {2.0, 2.5, 1.0});
  const auto grid = default_time_grid(300, 100.0, 1.0, 30);
  IntegratorControls loose;
  IntegratorControls tight;
  tight.rel_tol = 0.5 * loose.rel_tol;
  tight.abs_tol = 0.5 * loose.abs_tol;
  EXPECT_LE(sup_diff(evolve(eff, grid, loose).K_o, evolve(eff, grid, tight).K_o), 1e-6);
}

TEST(Evolve, SignedAndMagnitudeForms) {
  EffectiveTridiagonal eff = make_eff({0.0, 0.1}, {1.0});
  eff.signed_b = {-1.0};
  const Eigen::MatrixXd s = amplitude_generator(eff, OffdiagonalSign::Signed);
  EXPECT_EQ(s(0, 1), 1.0);
  EXPECT_EQ(s(1, 0), 1.0);
  EXPECT_EQ(s(1, 1), -0.1);
  const Eigen::MatrixXd m = amplitude_generator(eff, OffdiagonalSign::Magnitude);
  EXPECT_EQ(m(0, 1), -1.0);
  EXPECT_EQ(m(1, 0), 1.0);
}

TEST(Evolve, RenormalizationKeepsComplexity) {
  // strong damping drives P far below the renormalization threshold
  const EffectiveTridiagonal eff = make_eff({1.0, 1.1, 1.2}, {0.5, 0.5});
  const auto grid = linear_grid(60.0, 121);
  const Trajectory traj = evolve(eff, grid);
  EXPECT_LT(traj.P.back(), 1e-40);
  EXPECT_GT(traj.P.back(), 0.0);
  EXPECT_GT(traj.K_o.back(), 0.0);
  EXPECT_LT(traj.K_o.back(), 2.0);
  EXPECT_LT(traj.unreliable_from, 0);
}

TEST(Oracle, ClosedTwoSite) {
  const SuperOperator l = build_liouvillian(build_tfim_hamiltonian(2, -1.05, 0.5));
  const SuperVector seed = seed_of(build_pauli_operator(PauliString::single(2, 1, PauliAxis::Z)));
  IterationOptions opt;
  opt.store_bases = true;
  const KrylovResult r = bilanczos(l, seed, opt);
  const auto grid = linear_grid(20.0, 201);
  const Trajectory fast = evolve(effective_tridiagonal(r.data), grid);
  const Trajectory direct = direct_evolution_oracle(l, seed, r.bases, grid);
  EXPECT_LE(sup_diff(fast.K_o, direct.K_o), 1e-6);
  EXPECT_LE(sup_diff(fast.P, direct.P), 1e-6);
  EXPECT_NEAR(fast.K_o[0], direct.K_o[0], 1e-15);
  EXPECT_NEAR(fast.P[0], direct.P[0], 1e-15);
}

TEST(Oracle, DephasingQubit) {
  const double gamma = 0.08;
  const std::vector<SpinOperator> jumps = {
      build_pauli_operator(PauliString::single(1, 1, PauliAxis::Z, std::sqrt(gamma)))};
  const SuperOperator lo = build_lindbladian(
      build_pauli_operator(PauliString::single(1, 1, PauliAxis::Z, 0.0)), jumps);
  const SuperVector seed = seed_of(build_pauli_operator(PauliString::single(1, 1, PauliAxis::X)));
  IterationOptions opt;
  opt.store_bases = true;
  const KrylovResult r = bilanczos(lo, seed, opt);
  const auto grid = linear_grid(10.0, 101);
  const Trajectory direct = direct_evolution_oracle(lo, seed, r.bases, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    EXPECT_NEAR(direct.P[i], std::exp(-4.0 * gamma * grid[i]), 1e-8);
    EXPECT_EQ(direct.K_o[i], 0.0);
  }
}

TEST(Oracle, Guard) {
  const SuperOperator l = build_liouvillian(build_tfim_hamiltonian(6, 1.0, 0.0));
  KrylovBases bases;
  bases.stored = true;
  const std::vector<double> grid = {0.0, 1.0};
  EXPECT_THROW(direct_evolution_oracle(l, SuperVector::Zero(l.dimension()), bases, grid),
               ResourceError);
}

TEST(Series, Accessors) {
  const Trajectory traj = evolve(make_eff({0.0, 0.0}, {1.0}), linear_grid(2.0, 11));
  EXPECT_EQ(&probability(traj), &traj.P);
  EXPECT_EQ(&k_complexity(traj), &traj.K_raw);
  EXPECT_EQ(&normalized_k_complexity(traj), &traj.K_o);
  for (Index i = 0; i < traj.size(); ++i) EXPECT_NEAR(traj.K_o[i], traj.K_raw[i], 1e-8);
}

TEST(Saturation, ConstantAndPeriodic) {
  const auto grid = linear_grid(100.0, 5001);
  const std::vector<double> constant(grid.size(), 3.5);
  EXPECT_NEAR(saturation_value(grid, constant, 0.2), 3.5, 1e-14);
  EXPECT_NEAR(saturation_value(constant, 0.2), 3.5, 1e-14);
  std::vector<double> wave(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) wave[i] = std::pow(std::sin(2.0 * grid[i]), 2);
  EXPECT_NEAR(saturation_value(grid, wave, 0.2), 0.5, 0.01);
  EXPECT_THROW(saturation_value(grid, wave, 0.0), DomainError);
  EXPECT_THROW(saturation_value(std::vector<double>{}, 0.2), DomainError);
}

TEST(Saturation, UsesTrailingGridPoints) {
  const auto grid = default_time_grid(100, 100.0, 1.0, 10);
  std::vector<double> series(grid.size(), 0.0);
  for (std::size_t i = 80; i < grid.size(); ++i) series[i] = 1.0;
  EXPECT_NEAR(saturation_value(grid, series, 0.2), 1.0, 1e-14);
}

TEST(TimeGrid, Layout) {
  const auto grid = default_time_grid();
  ASSERT_EQ(grid.size(), 2000U);
  EXPECT_EQ(grid.front(), 0.0);
  EXPECT_EQ(grid.back(), 500.0);
  EXPECT_NEAR(grid[1] - grid[0], 0.01, 1e-15);
  EXPECT_NEAR(grid[100], 1.0, 1e-15);
  for (std::size_t i = 1; i < grid.size(); ++i) EXPECT_GT(grid[i], grid[i - 1]);
}

}  // namespace
}  // namespace opkrylov
