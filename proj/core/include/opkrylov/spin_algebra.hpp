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

// Basis convention: site j (1-based) is bit (N - j) of the computational
// basis index, so site 1 is the leftmost tensor factor. Bit value 0 is
// spin up (sigma^z = +1).

enum class PauliAxis : std::uint8_t { I, X, Y, Z, Plus, Minus };

char axis_label(PauliAxis axis);
PauliAxis axis_from_label(char label);

/// Product of single-site factors times a complex coefficient.
struct PauliString {
  std::vector<PauliAxis> factors;  // one per site, index 0 is site 1
  Complex coefficient{1.0, 0.0};

  int num_sites() const { return static_cast<int>(factors.size()); }
  /// Sites (1-based) carrying a non-identity factor.
  std::vector<int> support() const;

  static PauliString identity(int num_sites);
  static PauliString single(int num_sites, int site, PauliAxis axis, Complex coefficient = 1.0);
  /// Product of the listed (site, axis) factors; sites must be distinct.
  static PauliString product(int num_sites, std::span<const std::pair<int, PauliAxis>> factors,
                             Complex coefficient = 1.0);
};

/// Eigenvalue labels of a symmetry sector. Total spin is stored doubled so
/// that half-integer values are exact.
struct SectorLabel {
  int twice_spin = 0;
  int parity = 1;

  double spin() const { return 0.5 * twice_spin; }
  bool operator==(const SectorLabel&) const = default;
};

/// Sparse operator on the 2^N spin space or on a symmetry sector of it.
struct SpinOperator {
  SparseMatrix matrix;
  int num_sites = 0;
  std::optional<SectorLabel> sector;

  Index dimension() const { return matrix.rows(); }
  bool is_full_space() const { return !sector.has_value(); }
};

SpinOperator build_pauli_operator(const PauliString& spec);
SpinOperator identity_operator(int num_sites);

/// H = -sum_{j<N} Z_j Z_{j+1} - g sum_j X_j - h sum_j Z_j, open chain.
SpinOperator build_tfim_hamiltonian(int num_sites, double g, double h);

/// H = sum_{i<N} [J (S^x_i S^x_{i+1} + S^y_i S^y_{i+1}) + Jzz S^z_i S^z_{i+1}] + epsilon S^z_d
/// with S = sigma / 2 and d = defect_site.
SpinOperator build_xxz_hamiltonian(int num_sites, double J, double Jzz, double epsilon,
                                   int defect_site);

/// Boundary damping sqrt(alpha) sigma^{+,-} on sites 1 and N, then bulk
/// dephasing sqrt(gamma) sigma^z_i. Zero-rate groups are omitted.
std::vector<SpinOperator> build_tfim_jump_operators(int num_sites, double alpha, double gamma);

enum class JumpForm {
  /// L_1 on sites (1,2), L_N on sites (N-1,N), sqrt(gamma) sigma^z_i on every site.
  AsWritten,
  /// Reflection-even combinations (L + R L R) / sqrt(2) of each mirror pair.
  /// Every operator commutes with total S^z and with site reflection, which
  /// is what a single (S, P) sector calculation needs.
  ReflectionSymmetric,
};

std::vector<SpinOperator> build_xxz_jump_operators(int num_sites, double alpha, double gamma,
                                                   JumpForm form = JumpForm::AsWritten);

/// Total magnetization sum_i S^z_i.
SparseMatrix total_sz(int num_sites);
/// Permutation i <-> N + 1 - i on the computational basis.
SparseMatrix site_reflection(int num_sites);

/// Orthonormal basis of the joint eigenspace of total S^z (eigenvalue S) and
/// site reflection (eigenvalue P). Columns are full-space vectors.
struct SectorBasis {
  int num_sites = 0;
  SectorLabel label;
  SparseMatrix vectors;  // 2^N x dimension

  Index dimension() const { return vectors.cols(); }
  bool empty() const { return dimension() == 0; }
};

SectorBasis build_sector_basis(int num_sites, double total_spin, int parity);

/// Restrict a full-space operator that commutes with S^z and reflection.
SpinOperator project_to_sector(const SpinOperator& op, const SectorBasis& basis,
                               double tolerance = 1e-10);

/// Embed a sector operator back into the full space: B X B^dagger.
SpinOperator embed_from_sector(const SpinOperator& op, const SectorBasis& basis);

/// tr(A^dagger B) / tr(1) on the operative space.
Complex frobenius_inner(const SpinOperator& a, const SpinOperator& b);
double frobenius_norm(const SpinOperator& op);
SpinOperator normalized(const SpinOperator& op);

SpinOperator adjoint(const SpinOperator& op);
SpinOperator operator+(const SpinOperator& a, const SpinOperator& b);
SpinOperator operator*(Complex scale, const SpinOperator& op);

/// Largest |[A, B]_ij|.
double commutator_max(const SparseMatrix& a, const SparseMatrix& b);
/// Largest |A_ij - conj(A_ji)|.
double hermiticity_defect(const SparseMatrix& a);

SparseMatrix prune_small(SparseMatrix m, double tolerance = kDropTolerance);

// --- Pauli-string decomposition ---------------------------------------------

/// One term of O = sum_s c_s sigma_s over Hermitian Pauli strings (I, X, Y, Z).
struct PauliTerm {
  std::vector<PauliAxis> factors;
  Complex coefficient;

  int support_size() const;
};

/// Dense coefficient table indexed by (x_mask, z_mask): c = tr(sigma_s O) / 2^N.
/// Per site, (x, z) = (0,0) I, (1,0) X, (1,1) Y, (0,1) Z.
struct PauliCoefficients {
  int num_sites = 0;
  std::vector<Complex> values;  // size 4^N, index (x_mask << N) | z_mask

  Complex at(std::uint32_t x_mask, std::uint32_t z_mask) const {
    return values[(static_cast<std::size_t>(x_mask) << num_sites) | z_mask];
  }
};

PauliCoefficients pauli_coefficients(const DenseMatrix& op, int num_sites);
PauliCoefficients pauli_coefficients(const SpinOperator& op);

/// Terms with |c| above the tolerance, in (x_mask, z_mask) order.
std::vector<PauliTerm> pauli_decompose(const SpinOperator& op, double tolerance = 1e-14);
SpinOperator pauli_resum(std::span<const PauliTerm> terms, int num_sites);

}  // namespace opkrylov
