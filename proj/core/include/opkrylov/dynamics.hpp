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

#include <span>
#include <vector>

#include "opkrylov/common.hpp"
#include "opkrylov/krylov.hpp"
#include "opkrylov/liouville.hpp"

namespace opkrylov {

/// Which superdiagonal enters the amplitude equations. Signed keeps b_n = +-|b_n|
/// (exact projected dynamics); Magnitude uses |b_n| everywhere.
enum class OffdiagonalSign { Signed, Magnitude };

struct IntegratorControls {
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  OffdiagonalSign offdiagonal = OffdiagonalSign::Signed;
  bool store_amplitudes = false;
  /// Below this P the normalized complexity is reported as NaN.
  double underflow_floor = 1e-280;
  /// The state is rescaled (and the scale tracked separately) once its norm
  /// falls below this, so the absolute tolerance stays meaningful as P decays.
  double renormalize_below = 1e-3;
};

struct Trajectory {
  std::vector<double> t;
  /// Rows are times, columns Krylov indices. Empty unless amplitudes were requested.
  DenseMatrix phi;
  std::vector<double> P;
  std::vector<double> K_raw;
  std::vector<double> K_o;
  /// First time index with P under the floor, or -1.
  Index unreliable_from = -1;

  Index size() const { return static_cast<Index>(t.size()); }
};

/// dPhi/dt = S Phi, S(n,n) = -Im a_n, S(n,n-1) = |b_n|, S(n-1,n) = -b_n.
Trajectory evolve(const EffectiveTridiagonal& eff, std::span<const double> t_grid,
                  const IntegratorControls& controls = {});

/// The real generator S used by evolve.
Eigen::MatrixXd amplitude_generator(const EffectiveTridiagonal& eff,
                                    OffdiagonalSign offdiagonal = OffdiagonalSign::Signed);

/// Largest superoperator dimension the oracle accepts.
inline constexpr Index kOracleGuard = 1024;

/// Evolves the seed with exp(i L_o t) on the full space and projects,
/// phi_n = i^{-n} <<q_n|O(t)>>. Needs stored bases.
Trajectory direct_evolution_oracle(const SuperOperator& generator, const SuperVector& seed,
                                   const KrylovBases& bases, std::span<const double> t_grid,
                                   bool store_amplitudes = false);

const std::vector<double>& probability(const Trajectory& traj);
const std::vector<double>& k_complexity(const Trajectory& traj);
const std::vector<double>& normalized_k_complexity(const Trajectory& traj);

/// Linear on [0, t_linear_end) with linear_points samples, logarithmic after, ending at t_max.
std::vector<double> default_time_grid(Index points = 2000, double t_max = 500.0,
                                      double t_linear_end = 1.0, Index linear_points = 100);

/// Trapezoidal time average over the last window_fraction of the grid points.
/// NaN samples are skipped.
double saturation_value(std::span<const double> t, std::span<const double> series,
                        double window_fraction);
/// Sample mean over the last window_fraction of the samples.
double saturation_value(std::span<const double> series, double window_fraction);

}  // namespace opkrylov
