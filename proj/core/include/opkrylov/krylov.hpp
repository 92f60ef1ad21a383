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
#include <functional>
#include <optional>
#include <vector>

#include "opkrylov/common.hpp"
#include "opkrylov/liouville.hpp"
#include "opkrylov/spin_algebra.hpp"

namespace opkrylov {

enum class Termination { Breakdown, MaxSteps, DimensionBound };

const char* termination_label(Termination t);

enum class Reorthogonalization { Full, None };

struct IterationDiagnostics {
  /// Residuals were not small when omega collapsed (classical serious breakdown).
  bool serious_breakdown = false;
  double final_residual_r = 0.0;
  double final_residual_s = 0.0;
  /// Steps where omega had negative real part, i.e. b_n = -c_n.
  Index negative_omega_steps = 0;
  /// Largest ||p_n|| * ||q_n||; grows when the two bases drift apart.
  double max_norm_product = 1.0;
  /// Largest step-wise bi-orthonormality error: |<q_n|p_n> - 1| and, with full
  /// reorthogonalization, max_m<n |<q_m|p_n>|.
  double max_step_defect = 0.0;
  /// The O -> O^dagger parity projection was active.
  bool parity_projection = false;
  /// Identity components were projected out (unital generator, traceless seed).
  bool trace_projection = false;
};

/// a on the diagonal, b above it, c below it:
///   T(n, n) = a[n], T(n - 1, n) = b[n - 1], T(n, n - 1) = c[n - 1].
/// b[k] and c[k] hold the paper's b_{k+1}, c_{k+1}.
struct TridiagonalData {
  std::vector<Complex> a;
  std::vector<Complex> b;
  std::vector<double> c;
  Termination termination = Termination::MaxSteps;
  IterationDiagnostics diagnostics;

  Index krylov_dim() const { return static_cast<Index>(a.size()); }
  DenseMatrix dense() const;
};

/// Columns are |p_n>> and |q_n>>. Empty unless requested.
struct KrylovBases {
  DenseMatrix P;
  DenseMatrix Q;
  bool stored = false;
};

struct IterationOptions {
  /// 0 means "until breakdown or the dimension bound".
  Index max_steps = 0;
  /// Relative: stop when c_j <= breakdown_tol * max(1, largest c so far).
  double breakdown_tol = 1e-8;
  Reorthogonalization reorth = Reorthogonalization::Full;
  bool store_bases = false;
  /// Project p_n, q_n onto their exact O -> O^dagger parity after each step.
  bool preserve_hermiticity = true;
  /// Keep p_n, q_n traceless when L and L^dagger both annihilate the identity.
  bool preserve_trace = true;
  /// Hard cap on basis storage (2 * K * dim complex numbers).
  std::size_t memory_cap_bytes = std::size_t{6} << 29;  // 3 GiB
  /// Step-wise bi-orthonormality failure threshold.
  double reorth_failure = 1e-6;
  std::function<void(Index step)> progress;
};

struct KrylovResult {
  TridiagonalData data;
  KrylovBases bases;
};

/// D^2 - D + 1.
Index krylov_dimension_bound(Index hilbert_dim);

/// Bytes needed to hold both bases for the given capacity.
std::size_t basis_memory_estimate(Index super_dim, Index columns);

/// Hermitian Lanczos. Throws DomainError for a non-Hermitian generator.
KrylovResult lanczos(const SuperOperator& generator, const SuperVector& seed,
                     const IterationOptions& options = {});

/// Two-sided Lanczos with p_0 = q_0 = seed.
KrylovResult bilanczos(const SuperOperator& generator, const SuperVector& seed,
                       const IterationOptions& options = {});

struct HessenbergData {
  DenseMatrix h;  // K x K upper Hessenberg
  DenseMatrix basis;
  Termination termination = Termination::MaxSteps;

  Index krylov_dim() const { return h.rows(); }
  std::vector<double> subdiagonal_magnitudes() const;
};

/// Arnoldi with two-pass Gram-Schmidt. Cross-check only.
HessenbergData arnoldi(const SuperOperator& generator, const SuperVector& seed,
                       const IterationOptions& options = {});

struct EffectiveTridiagonal {
  /// Signed Im(a_n).
  std::vector<double> abs_a;
  /// |b_n|, same indexing as TridiagonalData::b.
  std::vector<double> abs_b;
  /// |b_n| carrying the sign of Re(b_n); differs from abs_b where omega_n < 0.
  std::vector<double> signed_b;
  /// |Im(b_n)| / |b_n| per entry.
  std::vector<double> phase_residual;
  Index negative_diagonals = 0;
};

/// Checks |b_n| = c_n and Re(a_n) ~ 0 within phase_tolerance (relative), then reduces
/// to the real data that drives the amplitude equations.
EffectiveTridiagonal effective_tridiagonal(const TridiagonalData& t,
                                           double phase_tolerance = 1e-8);

/// max_{m,n} |<q_m|p_n> - delta_mn| over stored bases.
double biorthonormality_residual(const KrylovBases& bases);

/// max_{ij} |(Q^dagger L P - T)_ij|. Only meant for small systems.
double reconstruction_residual(const SuperOperator& generator, const KrylovBases& bases,
                               const TridiagonalData& t);

/// Bi-Lanczos on state space for a (possibly non-Hermitian) Hamiltonian.
/// T(n, n) = <p_n|H|q_n>, c (below) = ||Q_{n+1}||, b (above) = <P|Q> / ||Q||.
KrylovResult bilanczos_state(const SparseMatrix& hamiltonian, const Vector& seed,
                             const IterationOptions& options = {});
inline KrylovResult bilanczos_state(const SpinOperator& hamiltonian, const Vector& seed,
                                    const IterationOptions& options = {}) {
  return bilanczos_state(hamiltonian.matrix, seed, options);
}

/// Spectrum of i * T. Dense LAPACK Hessenberg QR; no size guard needed.
StabilityReport tridiagonal_spectrum_check(const TridiagonalData& t, double threshold = 1e-10);

}  // namespace opkrylov
