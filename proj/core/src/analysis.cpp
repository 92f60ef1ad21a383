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

#include "opkrylov/analysis.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>

#include "opkrylov/spin_algebra.hpp"

namespace opkrylov {

namespace {

double centered_r_squared(std::span<const double> y, std::span<const double> fitted) {
  const double mean = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());
  double ss_res = 0.0;
  double ss_tot = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    ss_res += (y[i] - fitted[i]) * (y[i] - fitted[i]);
    ss_tot += (y[i] - mean) * (y[i] - mean);
  }
  if (ss_tot == 0.0) return ss_res == 0.0 ? 1.0 : 0.0;
  return std::max(0.0, 1.0 - ss_res / ss_tot);
}

double binomial(int n, int k) {
  double out = 1.0;
  for (int i = 1; i <= k; ++i) out = out * (n - k + i) / i;
  return out;
}

}  // namespace

Index plateau_onset(std::span<const double> values, Index window, double growth_per_window) {
  const auto n = static_cast<Index>(values.size());
  if (window < 1) throw DomainError("plateau window must be positive");
  std::vector<double> prefix(values.size() + 1, 0.0);
  for (std::size_t i = 0; i < values.size(); ++i) prefix[i + 1] = prefix[i] + values[i];
  auto trailing = [&](Index end) {  // mean of values[end - window, end)
    return (prefix[end] - prefix[end - window]) / static_cast<double>(window);
  };
  for (Index end = 2 * window; end <= n; ++end) {
    const double now = trailing(end);
    const double before = trailing(end - window);
    if (before <= 0.0) continue;
    if (now <= before * (1.0 + growth_per_window)) return end - window;
  }
  return n;
}

SlopeFit fit_diagonal_slope(std::span<const double> abs_a, std::optional<FitRange> range) {
  if (abs_a.size() < 10) throw DomainError("slope fit needs at least 10 values");
  FitRange r = range.value_or(
      FitRange{0, plateau_onset(abs_a, kPlateauWindow)});
  if (r.begin < 0 || r.end > static_cast<Index>(abs_a.size()) || r.end - r.begin < 2) {
    throw DomainError("degenerate fit range [" + std::to_string(r.begin) + ", " +
                      std::to_string(r.end) + ")");
  }
  const auto m = static_cast<std::size_t>(r.end - r.begin);
  std::vector<double> x(m), y(m);
  for (std::size_t i = 0; i < m; ++i) {
    x[i] = static_cast<double>(r.begin + static_cast<Index>(i));
    y[i] = abs_a[static_cast<std::size_t>(r.begin) + i];
  }
  const double xm = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(m);
  const double ym = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(m);
  double sxx = 0.0, sxy = 0.0, xx = 0.0, xy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sxx += (x[i] - xm) * (x[i] - xm);
    sxy += (x[i] - xm) * (y[i] - ym);
    xx += x[i] * x[i];
    xy += x[i] * y[i];
  }
  SlopeFit fit;
  fit.fit_range = r;
  fit.eta = sxy / sxx;
  fit.k = ym - fit.eta * xm;
  fit.eta_zero_offset = xx > 0.0 ? xy / xx : 0.0;
  std::vector<double> line(m), line0(m);
  for (std::size_t i = 0; i < m; ++i) {
    line[i] = fit.eta * x[i] + fit.k;
    line0[i] = fit.eta_zero_offset * x[i];
  }
  fit.r_squared = centered_r_squared(y, line);
  fit.r_squared_zero_offset = centered_r_squared(y, line0);
  return fit;
}

EtaModel fit_eta_model(std::span<const EtaPoint> points) {
  if (points.size() < 3) throw DomainError("eta model needs at least 3 points");
  const auto m = static_cast<Index>(points.size());
  bool use_alpha = false;
  bool use_gamma = false;
  for (const EtaPoint& p : points) {
    use_alpha = use_alpha || p.alpha != 0.0;
    use_gamma = use_gamma || p.gamma != 0.0;
  }
  const int cols = int{use_alpha} + int{use_gamma};
  if (cols == 0) throw DomainError("eta model: all rates are zero");
  Eigen::MatrixXd a(m, cols);
  Eigen::VectorXd y(m);
  for (Index i = 0; i < m; ++i) {
    int c = 0;
    if (use_alpha) a(i, c++) = points[i].alpha;
    if (use_gamma) a(i, c++) = points[i].gamma;
    y[i] = points[i].eta;
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  if (qr.rank() < cols) throw DomainError("eta model: (alpha, gamma) points are collinear");
  const Eigen::VectorXd coef = qr.solve(y);

  EtaModel model;
  int c = 0;
  if (use_alpha) model.c1 = coef[c++];
  if (use_gamma) model.c2 = coef[c++];
  const Eigen::VectorXd fitted = a * coef;
  model.residual = std::sqrt((y - fitted).squaredNorm() / static_cast<double>(m));
  std::vector<double> yv(y.data(), y.data() + m), fv(fitted.data(), fitted.data() + m);
  model.r_squared = centered_r_squared(yv, fv);
  model.points.assign(points.begin(), points.end());
  return model;
}

std::vector<double> smooth_descent(std::span<const double> values, Index window) {
  const auto n = static_cast<Index>(values.size());
  if (window < 1 || window % 2 == 0) throw DomainError("smoothing window must be odd");
  if (window > n) throw DomainError("smoothing window longer than the sequence");
  const Index half = window / 2;
  std::vector<double> out(values.size());
  for (Index i = 0; i < n; ++i) {
    const Index h = std::min({half, i, n - 1 - i});
    double sum = 0.0;
    for (Index j = i - h; j <= i + h; ++j) sum += values[static_cast<std::size_t>(j)];
    out[static_cast<std::size_t>(i)] = sum / static_cast<double>(2 * h + 1);
  }
  return out;
}

std::vector<double> running_median(std::span<const double> values, Index window) {
  const auto n = static_cast<Index>(values.size());
  if (window < 1) throw DomainError("median window must be positive");
  const Index half = window / 2;
  std::vector<double> out(values.size());
  std::vector<double> buf;
  for (Index i = 0; i < n; ++i) {
    Index lo = i - half;
    Index hi = i + half + 1;
    if (lo < 0) {
      hi = std::min(n, hi - lo);
      lo = 0;
    }
    if (hi > n) {
      lo = std::max<Index>(0, lo - (hi - n));
      hi = n;
    }
    buf.assign(values.begin() + lo, values.begin() + hi);
    const auto mid = buf.begin() + static_cast<std::ptrdiff_t>(buf.size() / 2);
    std::nth_element(buf.begin(), mid, buf.end());
    double med = *mid;
    if (buf.size() % 2 == 0) {
      med = 0.5 * (med + *std::max_element(buf.begin(), mid));
    }
    out[static_cast<std::size_t>(i)] = med;
  }
  return out;
}

OutlierResult filter_outliers(std::span<const double> values, double multiplier, Index window) {
  if (!(multiplier > 1.0)) throw DomainError("outlier multiplier must exceed 1");
  OutlierResult out;
  out.values.assign(values.begin(), values.end());
  std::vector<bool> hit(values.size(), false);
  for (int pass = 0; pass < 1000; ++pass) {
    const std::vector<double> med = running_median(out.values, window);
    bool changed = false;
    for (std::size_t i = 0; i < out.values.size(); ++i) {
      if (out.values[i] > multiplier * med[i]) {
        out.values[i] = med[i];
        hit[i] = true;
        changed = true;
      }
    }
    if (!changed) break;
  }
  for (std::size_t i = 0; i < hit.size(); ++i) {
    if (hit[i]) out.removed.push_back(static_cast<Index>(i));
  }
  return out;
}

SupportProfile support_profile(const SuperVector& v, int num_sites) {
  if (num_sites < 1 || num_sites > kMaxSites) throw DomainError("site count out of range");
  const Index dim = Index{1} << num_sites;
  if (v.size() != dim * dim) {
    throw DimensionError("support profile needs a vector on the full 4^N operator space");
  }
  const Eigen::Map<const DenseMatrix> op(v.data(), dim, dim);
  const PauliCoefficients coeffs = pauli_coefficients(DenseMatrix(op), num_sites);
  SupportProfile profile;
  profile.num_sites = num_sites;
  profile.weights.assign(static_cast<std::size_t>(num_sites) + 1, 0.0);
  const std::uint32_t mask = (std::uint32_t{1} << num_sites) - 1;
  double total = 0.0;
  for (std::size_t idx = 0; idx < coeffs.values.size(); ++idx) {
    const auto x = static_cast<std::uint32_t>(idx >> num_sites);
    const auto z = static_cast<std::uint32_t>(idx) & mask;
    const double w = std::norm(coeffs.values[idx]);
    profile.weights[static_cast<std::size_t>(std::popcount(x | z))] += w;
    total += w;
  }
  if (total > 0.0) {
    for (double& w : profile.weights) w /= total;
  }
  return profile;
}

WallSteps detect_wall_steps(std::span<const SupportProfile> profiles, double threshold,
                            WallCriterion criterion) {
  WallSteps steps;
  for (std::size_t n = 0; n < profiles.size(); ++n) {
    const SupportProfile& p = profiles[n];
    const auto top = static_cast<std::size_t>(p.num_sites);
    if (p.weights.size() != top + 1) throw DimensionError("malformed support profile");
    if (!steps.n1 && p.weights[top] > threshold) steps.n1 = static_cast<Index>(n);
    if (!steps.n2) {
      auto score = [&](std::size_t s) {
        if (criterion == WallCriterion::Mass) return p.weights[s];
        const double strings = binomial(p.num_sites, static_cast<int>(s)) * std::pow(3.0, s);
        return p.weights[s] / strings;
      };
      bool dominant = p.weights[top] > threshold;
      for (std::size_t s = 0; s < top && dominant; ++s) dominant = score(top) >= score(s);
      if (dominant) steps.n2 = static_cast<Index>(n);
    }
    if (steps.n1 && steps.n2) break;
  }
  return steps;
}

}  // namespace opkrylov
