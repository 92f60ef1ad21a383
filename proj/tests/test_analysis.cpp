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

#include <cmath>
#include <vector>

#include "opkrylov/analysis.hpp"
#include "opkrylov/liouville.hpp"
#include "opkrylov/spin_algebra.hpp"

namespace opkrylov {
namespace {

SuperVector pauli_vector(int n, std::initializer_list<std::pair<int, PauliAxis>> factors,
                         Complex c = 1.0) {
  const std::vector<std::pair<int, PauliAxis>> list(factors);
  return vectorize(build_pauli_operator(PauliString::product(n, list, c)));
}

SupportProfile profile_with(int n, std::vector<double> w) {
  SupportProfile p;
  p.num_sites = n;
  p.weights = std::move(w);
  return p;
}

TEST(SlopeFit, ExactLine) {
  std::vector<double> a(200);
  for (std::size_t n = 0; n < a.size(); ++n) a[n] = 0.003 * static_cast<double>(n);
  const SlopeFit fit = fit_diagonal_slope(a, FitRange{0, 200});
  EXPECT_NEAR(fit.eta, 0.003, 1e-12);
  EXPECT_NEAR(fit.k, 0.0, 1e-12);
  EXPECT_NEAR(fit.r_squared, 1.0, 1e-12);
  EXPECT_NEAR(fit.eta_zero_offset, 0.003, 1e-12);
}

TEST(SlopeFit, AutoRangeStopsAtPlateau) {
  std::vector<double> a(1000);
  for (std::size_t n = 0; n < a.size(); ++n) a[n] = 0.01 + 0.002 * std::min<double>(n, 400.0);
  const SlopeFit fit = fit_diagonal_slope(a);
  EXPECT_GT(fit.fit_range.end, 350);
  EXPECT_LE(fit.fit_range.end, 410);
  EXPECT_NEAR(fit.eta, 0.002, 2e-5);
  EXPECT_NEAR(fit.k, 0.01, 5e-3);
}

TEST(SlopeFit, Errors) {
  const std::vector<double> shorty(5, 1.0);
  EXPECT_THROW(fit_diagonal_slope(shorty), DomainError);
  const std::vector<double> a(50, 1.0);
  EXPECT_THROW(fit_diagonal_slope(a, FitRange{10, 11}), DomainError);
  EXPECT_THROW(fit_diagonal_slope(a, FitRange{10, 60}), DomainError);
}

TEST(Plateau, WindowAndOnset) {
  const std::vector<double> flat(100, 2.0);
  EXPECT_LE(plateau_onset(flat, 10), 10);
  std::vector<double> ramp(100);
  for (std::size_t i = 0; i < ramp.size(); ++i) ramp[i] = 1.0 + static_cast<double>(i);
  EXPECT_EQ(plateau_onset(ramp, 10), 100);
}

TEST(EtaModel, ExactPlane) {
  const std::vector<EtaPoint> pts = {
      {0.01, 0.0, 0.2 * 0.01}, {0.0, 0.05, 0.26 * 0.05}, {0.1, 0.1, 0.2 * 0.1 + 0.26 * 0.1}};
  const EtaModel m = fit_eta_model(pts);
  EXPECT_NEAR(m.c1, 0.2, 1e-12);
  EXPECT_NEAR(m.c2, 0.26, 1e-12);
  EXPECT_NEAR(m.residual, 0.0, 1e-14);
}

TEST(EtaModel, TableColumns) {
  // integrable Table 1 values
  const std::vector<EtaPoint> gamma_col = {
      {0.0, 0.01, 0.0026}, {0.0, 0.05, 0.0130}, {0.0, 0.10, 0.0261}, {0.0, 0.15, 0.0391}};
  const EtaModel g = fit_eta_model(gamma_col);
  EXPECT_NEAR(g.c2, 0.26, 0.005);
  EXPECT_EQ(g.c1, 0.0);
  EXPECT_GT(g.r_squared, 0.999);
  const std::vector<EtaPoint> alpha_row = {
      {0.01, 0.0, 0.0020}, {0.05, 0.0, 0.0101}, {0.10, 0.0, 0.0203}, {0.15, 0.0, 0.0305}};
  const EtaModel a = fit_eta_model(alpha_row);
  EXPECT_NEAR(a.c1, 0.20, 0.005);
  EXPECT_EQ(a.c2, 0.0);
  // single-variable data: the through-origin 1-D slope sum(x y) / sum(x^2)
  double sxy = 0.0;
  double sxx = 0.0;
  for (const EtaPoint& p : alpha_row) {
    sxy += p.alpha * p.eta;
    sxx += p.alpha * p.alpha;
  }
  EXPECT_NEAR(a.c1, sxy / sxx, 1e-14);
}

TEST(EtaModel, RankDeficient) {
  const std::vector<EtaPoint> two = {{0.01, 0.0, 0.002}, {0.02, 0.0, 0.004}};
  EXPECT_THROW(fit_eta_model(two), DomainError);
  const std::vector<EtaPoint> collinear = {
      {0.01, 0.01, 0.002}, {0.02, 0.02, 0.004}, {0.03, 0.03, 0.006}};
  EXPECT_THROW(fit_eta_model(collinear), DomainError);
}

TEST(Smoothing, Basics) {
  const std::vector<double> constant(30, 1.7);
  for (double v : smooth_descent(constant, 5)) EXPECT_NEAR(v, 1.7, 1e-15);
  const std::vector<double> raw = {1.0, 5.0, 2.0, 8.0};
  EXPECT_EQ(smooth_descent(raw, 1), raw);
  std::vector<double> noisy(40);
  for (std::size_t n = 0; n < noisy.size(); ++n) {
    // zero-mean period-3 pattern is removed exactly by a 3-point average
    const double noise[] = {1.0, -0.5, -0.5};
    noisy[n] = 0.5 * static_cast<double>(n) + 2.0 + noise[n % 3];
  }
  const auto smooth = smooth_descent(noisy, 3);
  for (std::size_t n = 1; n + 1 < noisy.size(); ++n) {
    EXPECT_NEAR(smooth[n], 0.5 * static_cast<double>(n) + 2.0, 1e-12);
  }
  EXPECT_EQ(smooth.front(), noisy.front());
}

TEST(Smoothing, AlternatingNoiseOnLine) {
  std::vector<double> noisy(41);
  for (std::size_t n = 0; n < noisy.size(); ++n) {
    noisy[n] = 0.5 * static_cast<double>(n) + (n % 2 == 0 ? 1.0 : -1.0);
  }
  const auto smooth = smooth_descent(noisy, 3);
  // +-1 noise averages to +-1/3 over three points; the residual alternates around the line
  for (std::size_t n = 1; n + 1 < noisy.size(); ++n) {
    EXPECT_NEAR(std::abs(smooth[n] - 0.5 * static_cast<double>(n)), 1.0 / 3.0, 1e-12);
  }
}

TEST(Outliers, SpikeAndIdempotence) {
  std::vector<double> flat(300, 2.0);
  OutlierResult none = filter_outliers(flat, 3.0);
  EXPECT_TRUE(none.removed.empty());
  EXPECT_EQ(none.values, flat);
  flat[150] = 200.0;
  OutlierResult one = filter_outliers(flat, 3.0);
  ASSERT_EQ(one.removed.size(), 1U);
  EXPECT_EQ(one.removed[0], 150);
  EXPECT_EQ(one.values[150], 2.0);
  EXPECT_TRUE(filter_outliers(one.values, 3.0).removed.empty());
}

TEST(Outliers, RunningMedianClamp) {
  const std::vector<double> v = {5.0, 1.0, 3.0, 2.0, 4.0};
  const auto med = running_median(v, 3);
  EXPECT_EQ(med[2], 2.0);
  EXPECT_EQ(med.size(), v.size());
}

TEST(Support, SingleStrings) {
  const SupportProfile a = support_profile(pauli_vector(6, {{3, PauliAxis::Z}}), 6);
  EXPECT_NEAR(a.weights[1], 1.0, 1e-12);
  const SupportProfile b =
      support_profile(pauli_vector(6, {{2, PauliAxis::Z}, {3, PauliAxis::Z}, {4, PauliAxis::Z}}), 6);
  EXPECT_NEAR(b.weights[3], 1.0, 1e-12);
  double sum = 0.0;
  for (double w : b.weights) {
    EXPECT_GE(w, 0.0);
    sum += w;
  }
  EXPECT_NEAR(sum, 1.0, 1e-10);
}

TEST(Support, MixedOperator) {
  const SuperVector v = (pauli_vector(3, {{1, PauliAxis::Z}}) +
                         pauli_vector(3, {{1, PauliAxis::X}, {2, PauliAxis::X}})) /
                        std::sqrt(2.0);
  const SupportProfile p = support_profile(v, 3);
  EXPECT_NEAR(p.weights[1], 0.5, 1e-12);
  EXPECT_NEAR(p.weights[2], 0.5, 1e-12);
  EXPECT_THROW(support_profile(SuperVector::Zero(10), 3), DimensionError);
}

TEST(Wall, SyntheticProfiles) {
  const int n = 4;
  std::vector<SupportProfile> flat(20, profile_with(n, {0.0, 1.0, 0.0, 0.0, 0.0}));
  const WallSteps none = detect_wall_steps(flat);
  EXPECT_FALSE(none.n1);
  EXPECT_FALSE(none.n2);

  std::vector<SupportProfile> profiles;
  for (int k = 0; k < 20; ++k) {
    if (k < 7) {
      profiles.push_back(profile_with(n, {0.0, 0.5, 0.5, 0.0, 0.0}));
    } else if (k < 12) {
      profiles.push_back(profile_with(n, {0.0, 0.2, 0.3, 0.4, 0.1}));
    } else {
      profiles.push_back(profile_with(n, {0.0, 0.1, 0.1, 0.2, 0.6}));
    }
  }
  const WallSteps steps = detect_wall_steps(profiles);
  EXPECT_EQ(steps.n1, 7);
  EXPECT_EQ(steps.n2, 12);
}

TEST(Wall, MonotoneInThreshold) {
  const int n = 3;
  std::vector<SupportProfile> profiles;
  for (int k = 0; k < 10; ++k) {
    const double w = 1e-12 * std::pow(100.0, k);
    profiles.push_back(profile_with(n, {0.0, 1.0 - std::min(w, 0.9), 0.0, std::min(w, 0.9)}));
  }
  Index last = 0;
  for (double threshold : {1e-14, 1e-10, 1e-6, 1e-3}) {
    const WallSteps s = detect_wall_steps(profiles, threshold);
    ASSERT_TRUE(s.n1);
    EXPECT_GE(*s.n1, last);
    last = *s.n1;
  }
}

}  // namespace
}  // namespace opkrylov
