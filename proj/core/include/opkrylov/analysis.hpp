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

#include <optional>
#include <span>
#include <vector>

#include "opkrylov/common.hpp"

namespace opkrylov {

struct FitRange {
  Index begin = 0;
  Index end = 0;  // exclusive
};

struct SlopeFit {
  double eta = 0.0;
  double k = 0.0;
  FitRange fit_range;
  double r_squared = 0.0;
  /// Same range, line forced through the origin.
  double eta_zero_offset = 0.0;
  double r_squared_zero_offset = 0.0;
};

/// Window of the trailing moving average used by the plateau detector. Fixed: the
/// initial growth of |a_n| spans a few tens of steps whatever K is.
inline constexpr Index kPlateauWindow = 10;

/// First index where the trailing average grew by at most growth_per_window
/// (relative) over the last window. Returns the length if it never levels off.
Index plateau_onset(std::span<const double> values, Index window, double growth_per_window = 0.01);

/// Least-squares line over [0, plateau_onset) or over an explicit range. Pass |a_n|.
SlopeFit fit_diagonal_slope(std::span<const double> abs_a,
                            std::optional<FitRange> range = std::nullopt);

struct EtaPoint {
  double alpha = 0.0;
  double gamma = 0.0;
  double eta = 0.0;
};

struct EtaModel {
  double c1 = 0.0;
  double c2 = 0.0;
  /// Root-mean-square residual.
  double residual = 0.0;
  /// Centered coefficient of determination.
  double r_squared = 0.0;
  std::vector<EtaPoint> points;
};

/// eta = c1 alpha + c2 gamma, no offset. A rate that is zero across all points is
/// dropped and its coefficient reported as 0.
EtaModel fit_eta_model(std::span<const EtaPoint> points);

/// Centered moving average; the window shrinks symmetrically near the ends.
std::vector<double> smooth_descent(std::span<const double> values, Index window);

struct OutlierResult {
  std::vector<double> values;
  std::vector<Index> removed;
};

/// Running median over `window` samples, clamped at the ends.
std::vector<double> running_median(std::span<const double> values, Index window = 101);

/// Replaces values above multiplier * running median by that median, repeating
/// until nothing changes.
OutlierResult filter_outliers(std::span<const double> values, double multiplier,
                              Index window = 101);

struct SupportProfile {
  int num_sites = 0;
  /// weights[s] = squared Pauli mass on strings of support s, s = 0..N.
  std::vector<double> weights;
};

/// Pauli-string mass grouped by support size. v must live on the full 4^N space.
SupportProfile support_profile(const SuperVector& v, int num_sites);

enum class WallCriterion {
  /// n2: w_N is the largest class weight.
  Mass,
  /// n2: w_N per string is the largest class weight per string.
  Density,
};

struct WallSteps {
  std::optional<Index> n1;
  std::optional<Index> n2;
};

WallSteps detect_wall_steps(std::span<const SupportProfile> profiles, double threshold = 1e-10,
                            WallCriterion criterion = WallCriterion::Mass);

}  // namespace opkrylov
