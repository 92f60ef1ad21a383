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

#include "opkrylov/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <boost/numeric/odeint.hpp>
#include <unsupported/Eigen/MatrixFunctions>

namespace opkrylov {

namespace {

using State = std::vector<double>;
namespace odeint = boost::numeric::odeint;

void check_grid(std::span<const double> t_grid) {
  if (t_grid.empty() || t_grid.front() != 0.0) {
    throw DomainError("time grid must start at 0");
  }
  for (std::size_t i = 1; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > t_grid[i - 1])) throw DomainError("time grid must be strictly increasing");
  }
}

struct Tridiagonal {
  std::vector<double> diag;   // -Im a_n
  std::vector<double> lower;  // S(n, n-1), n >= 1
  std::vector<double> upper;  // S(n-1, n), n >= 1

  void operator()(const State& x, State& dx, double /*t*/) const {
    const std::size_t k = diag.size();
    for (std::size_t n = 0; n < k; ++n) {
      double v = diag[n] * x[n];
      if (n > 0) v += lower[n - 1] * x[n - 1];
      if (n + 1 < k) v += upper[n] * x[n + 1];
      dx[n] = v;
    }
  }
};

Tridiagonal build_system(const EffectiveTridiagonal& eff, OffdiagonalSign offdiagonal) {
  Tridiagonal sys;
  sys.diag.reserve(eff.abs_a.size());
  for (double a : eff.abs_a) sys.diag.push_back(-a);
  for (std::size_t n = 0; n < eff.abs_b.size(); ++n) {
    sys.lower.push_back(eff.abs_b[n]);
    const bool signed_form = offdiagonal == OffdiagonalSign::Signed && n < eff.signed_b.size();
    sys.upper.push_back(-(signed_form ? eff.signed_b[n] : eff.abs_b[n]));
  }
  return sys;
}

// Fills P, K_raw, K_o at index i from amplitudes known up to a factor exp(log_scale).
template <class Amplitudes>
void record(Trajectory& traj, std::size_t i, const Amplitudes& x, std::size_t k, double log_scale,
            double floor) {
  double p = 0.0;
  double kn = 0.0;
  for (std::size_t n = 0; n < k; ++n) {
    const double w = std::norm(x[n]);
    p += w;
    kn += static_cast<double>(n) * w;
  }
  const double factor = std::exp(2.0 * log_scale);
  traj.P[i] = p * factor;
  traj.K_raw[i] = kn * factor;
  if (traj.P[i] < floor || !(p > 0.0)) {
    traj.K_o[i] = std::numeric_limits<double>::quiet_NaN();
    if (traj.unreliable_from < 0) traj.unreliable_from = static_cast<Index>(i);
  } else {
    traj.K_o[i] = kn / p;
  }
}

Trajectory empty_trajectory(std::span<const double> t_grid, Index k, bool amplitudes) {
  Trajectory traj;
  traj.t.assign(t_grid.begin(), t_grid.end());
  traj.P.assign(t_grid.size(), 0.0);
  traj.K_raw.assign(t_grid.size(), 0.0);
  traj.K_o.assign(t_grid.size(), 0.0);
  if (amplitudes) traj.phi = DenseMatrix::Zero(static_cast<Index>(t_grid.size()), k);
  return traj;
}

}  // namespace

Eigen::MatrixXd amplitude_generator(const EffectiveTridiagonal& eff, OffdiagonalSign offdiagonal) {
  const Tridiagonal sys = build_system(eff, offdiagonal);
  const auto k = static_cast<Index>(sys.diag.size());
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(k, k);
  for (Index n = 0; n < k; ++n) s(n, n) = sys.diag[n];
  for (Index n = 1; n < k; ++n) {
    s(n, n - 1) = sys.lower[n - 1];
    s(n - 1, n) = sys.upper[n - 1];
  }
  return s;
}

Trajectory evolve(const EffectiveTridiagonal& eff, std::span<const double> t_grid,
                  const IntegratorControls& controls) {
  check_grid(t_grid);
  const std::size_t k = eff.abs_a.size();
  if (k == 0) throw DomainError("empty tridiagonal data");
  if (eff.abs_b.size() + 1 != k) throw DimensionError("abs_b must have K - 1 entries");

  const Tridiagonal sys = build_system(eff, controls.offdiagonal);
  Trajectory traj = empty_trajectory(t_grid, static_cast<Index>(k), controls.store_amplitudes);

  State x(k, 0.0);
  x[0] = 1.0;
  double log_scale = 0.0;
  auto stepper =
      odeint::make_dense_output(controls.abs_tol, controls.rel_tol,
                                odeint::runge_kutta_dopri5<State>());
  double rate = 1.0;
  for (std::size_t n = 0; n < k; ++n) {
    rate = std::max(rate, std::abs(sys.diag[n]) + (n > 0 ? std::abs(sys.lower[n - 1]) : 0.0) +
                              (n + 1 < k ? std::abs(sys.upper[n]) : 0.0));
  }
  const double dt0 = 0.01 / rate;
  stepper.initialize(x, 0.0, dt0);

  auto store = [&](std::size_t i, const State& state) {
    record(traj, i, state, k, log_scale, controls.underflow_floor);
    if (controls.store_amplitudes) {
      const double factor = std::exp(log_scale);
      for (std::size_t n = 0; n < k; ++n) {
        traj.phi(static_cast<Index>(i), static_cast<Index>(n)) = state[n] * factor;
      }
    }
  };

  store(0, x);
  State buffer(k);
  std::size_t next = 1;
  while (next < t_grid.size()) {
    const double before = stepper.current_time();
    stepper.do_step(sys);
    const double now = stepper.current_time();
    if (!(now > before) || stepper.current_time_step() < 1e-14 * std::max(1.0, now)) {
      throw IntegrationError("step size underflow", now);
    }
    while (next < t_grid.size() && t_grid[next] <= now) {
      stepper.calc_state(t_grid[next], buffer);
      store(next, buffer);
      ++next;
    }
    const State& current = stepper.current_state();
    double norm2 = 0.0;
    for (double v : current) norm2 += v * v;
    if (!std::isfinite(norm2)) throw IntegrationError("non-finite amplitudes", now);
    const double norm = std::sqrt(norm2);
    if (norm < controls.renormalize_below && norm > 0.0) {
      State scaled(current);
      for (double& v : scaled) v /= norm;
      log_scale += std::log(norm);
      stepper.initialize(scaled, now, stepper.current_time_step());
    }
  }
  return traj;
}

Trajectory direct_evolution_oracle(const SuperOperator& generator, const SuperVector& seed,
                                   const KrylovBases& bases, std::span<const double> t_grid,
                                   bool store_amplitudes) {
  check_grid(t_grid);
  const Index dim = generator.dimension();
  if (dim > kOracleGuard) {
    throw ResourceError("oracle limited to superoperator dimension " +
                        std::to_string(kOracleGuard) + ", got " + std::to_string(dim));
  }
  if (!bases.stored) throw DomainError("oracle needs stored Krylov bases");
  if (seed.size() != dim || bases.Q.rows() != dim) {
    throw DimensionError("seed or bases do not match the generator");
  }
  const Index k = bases.Q.cols();
  Trajectory traj = empty_trajectory(t_grid, k, store_amplitudes);

  const DenseMatrix a = kI * DenseMatrix(generator.matrix());
  // i^{-n} phases applied to the projections.
  Vector phase(k);
  for (Index n = 0; n < k; ++n) {
    static constexpr Complex kPowers[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
    phase[n] = kPowers[n % 4];
  }
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    const DenseMatrix propagator = (a * t_grid[i]).exp();
    const Vector evolved = propagator * seed;
    const Vector phi = (bases.Q.adjoint() * evolved).cwiseProduct(phase);
    record(traj, i, phi, static_cast<std::size_t>(k), 0.0, 1e-280);
    if (store_amplitudes) traj.phi.row(static_cast<Index>(i)) = phi.transpose();
  }
  return traj;
}

const std::vector<double>& probability(const Trajectory& traj) { return traj.P; }
const std::vector<double>& k_complexity(const Trajectory& traj) { return traj.K_raw; }
const std::vector<double>& normalized_k_complexity(const Trajectory& traj) { return traj.K_o; }

std::vector<double> default_time_grid(Index points, double t_max, double t_linear_end,
                                      Index linear_points) {
  if (points < 2 || linear_points < 1 || linear_points >= points || t_linear_end <= 0.0 ||
      t_max <= t_linear_end) {
    throw DomainError("invalid time grid parameters");
  }
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(points));
  for (Index i = 0; i < linear_points; ++i) {
    grid.push_back(t_linear_end * static_cast<double>(i) / static_cast<double>(linear_points));
  }
  const Index log_points = points - linear_points;
  const double lo = std::log(t_linear_end);
  const double hi = std::log(t_max);
  for (Index i = 0; i < log_points; ++i) {
    const double frac = log_points == 1 ? 1.0 : static_cast<double>(i) / (log_points - 1);
    grid.push_back(std::exp(lo + frac * (hi - lo)));
  }
  grid.back() = t_max;
  return grid;
}

double saturation_value(std::span<const double> t, std::span<const double> series,
                        double window_fraction) {
  if (t.size() != series.size()) throw DimensionError("time and series lengths differ");
  if (t.size() < 2 || !(window_fraction > 0.0) || window_fraction > 1.0) {
    throw DomainError("saturation window is empty");
  }
  const auto count = std::max<std::size_t>(
      2, static_cast<std::size_t>(std::ceil(window_fraction * static_cast<double>(t.size()))));
  double area = 0.0;
  double span = 0.0;
  for (std::size_t i = t.size() - count + 1; i < t.size(); ++i) {
    if (std::isnan(series[i - 1]) || std::isnan(series[i])) continue;
    area += 0.5 * (series[i - 1] + series[i]) * (t[i] - t[i - 1]);
    span += t[i] - t[i - 1];
  }
  if (!(span > 0.0)) throw DomainError("saturation window is empty");
  return area / span;
}

double saturation_value(std::span<const double> series, double window_fraction) {
  if (series.empty() || !(window_fraction > 0.0) || window_fraction > 1.0) {
    throw DomainError("saturation window is empty");
  }
  const auto count = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::floor(window_fraction * static_cast<double>(series.size()))));
  double sum = 0.0;
  std::size_t used = 0;
  for (std::size_t i = series.size() - count; i < series.size(); ++i) {
    if (std::isnan(series[i])) continue;
    sum += series[i];
    ++used;
  }
  if (used == 0) throw DomainError("saturation window is empty");
  return sum / static_cast<double>(used);
}

}  // namespace opkrylov
