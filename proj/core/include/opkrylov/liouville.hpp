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

#include <iosfwd>
#include <span>
#include <vector>

#include "opkrylov/common.hpp"
#include "opkrylov/spin_algebra.hpp"

namespace opkrylov {

// Column stacking: vec(O)[i + j * D] = O(i, j). Then vec(A X B) = (B^T kron A) vec(X),
// and the plain dot product satisfies vec(A)^dagger vec(B) = D * frobenius_inner(A, B).

SuperVector vectorize(const SpinOperator& op);
/// Inverse of vectorize. The result is tagged with the given site count.
SpinOperator devectorize(const SuperVector& v, int num_sites = 0);

/// Ratio between the SuperVector dot product and frobenius_inner for a D-dim space.
inline double supervector_inner_ratio(Index operator_dim) {
  return static_cast<double>(operator_dim);
}

/// Immutable sparse superoperator. Both the forward matrix and its conjugate
/// transpose are materialized so that adjoint products cost one sparse matvec.
class SuperOperator {
 public:
  SuperOperator() = default;
  SuperOperator(SparseMatrix forward, bool hermitian);

  const SparseMatrix& matrix() const { return forward_; }
  const SparseMatrix& adjoint_matrix() const { return backward_; }

  /// D^2 (or the squared sector dimension).
  Index dimension() const { return forward_.rows(); }
  /// D, the dimension of the operators the superoperator acts on.
  Index operator_dimension() const { return operator_dim_; }
  /// True iff built without a dissipator.
  bool is_hermitian() const { return hermitian_; }

  void apply(const SuperVector& x, SuperVector& y) const { y.noalias() = forward_ * x; }
  void apply_adjoint(const SuperVector& x, SuperVector& y) const { y.noalias() = backward_ * x; }
  SuperVector operator*(const SuperVector& x) const { return forward_ * x; }

  Index nonzeros() const { return forward_.nonZeros(); }

  SuperOperator adjoint() const;

 private:
  SparseMatrix forward_;
  SparseMatrix backward_;
  Index operator_dim_ = 0;
  bool hermitian_ = false;
};

/// L . = [H, .]. Rejects non-Hermitian H.
SuperOperator build_liouvillian(const SpinOperator& hamiltonian);

/// L_o . = [H, .] - i sum_k (L_k^dagger . L_k - 1/2 {L_k^dagger L_k, .}).
/// An empty jump list reproduces build_liouvillian exactly.
SuperOperator build_lindbladian(const SpinOperator& hamiltonian,
                                std::span<const SpinOperator> jumps);

SuperOperator adjoint(const SuperOperator& s);

/// Apply the adjoint-form Lindblad generator to an operator without vectorizing.
/// Reference path for basis-wise checks.
DenseMatrix apply_lindblad_direct(const DenseMatrix& hamiltonian,
                                  std::span<const DenseMatrix> jumps, const DenseMatrix& op);

struct StabilityReport {
  /// Largest real part over the spectrum of i * generator.
  double max_real_part = 0.0;
  /// max_real_part <= threshold.
  bool stable = false;
  /// Spectrum closed under complex conjugation within tolerance.
  bool conjugate_pairs = false;
  double threshold = 1e-10;
  std::vector<Complex> eigenvalues;
};

/// Largest operator-space dimension accepted by the dense spectrum check.
inline constexpr Index kDenseSpectrumGuard = 4096;

/// Dense eigen-decomposition of i * L_o. Throws ResourceError above the guard.
StabilityReport generator_spectrum_check(const SuperOperator& s, double threshold = 1e-10);

/// Shared by the dense and tridiagonal routes.
StabilityReport stability_from_eigenvalues(std::vector<Complex> eigenvalues, double threshold);

/// Whitespace-separated "row col re im" lines, 0-based, one per stored entry.
void write_triplets(std::ostream& out, const SuperOperator& s);

}  // namespace opkrylov
