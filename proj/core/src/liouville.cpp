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

#include "opkrylov/liouville.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>

#include <unsupported/Eigen/KroneckerProduct>

namespace opkrylov {

namespace {

SparseMatrix sparse_identity(Index dim) {
  SparseMatrix id(dim, dim);
  id.setIdentity();
  return id;
}

SparseMatrix kron(const SparseMatrix& a, const SparseMatrix& b) {
  SparseMatrix out = Eigen::kroneckerProduct(a, b);
  return out;
}

void require_hermitian(const SpinOperator& h) {
  double scale = 1.0;
  for (Index k = 0; k < h.matrix.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(h.matrix, k); it; ++it) {
      scale = std::max(scale, std::abs(it.value()));
    }
  }
  const double defect = hermiticity_defect(h.matrix);
  if (defect > 1e-12 * scale) {
    throw DomainError("Hamiltonian is not Hermitian (defect " + std::to_string(defect) + ")");
  }
}

}  // namespace

SuperVector vectorize(const SpinOperator& op) {
  const Index dim = op.dimension();
  SuperVector v = SuperVector::Zero(dim * dim);
  for (Index row = 0; row < op.matrix.outerSize(); ++row) {
    for (SparseMatrix::InnerIterator it(op.matrix, row); it; ++it) {
      v[it.row() + it.col() * dim] = it.value();
    }
  }
  return v;
}

SpinOperator devectorize(const SuperVector& v, int num_sites) {
  const auto dim = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(v.size()))));
  if (dim * dim != v.size()) {
    throw DimensionError("devectorize: length " + std::to_string(v.size()) +
                         " is not a perfect square");
  }
  std::vector<Eigen::Triplet<Complex>> t;
  for (Index k = 0; k < v.size(); ++k) {
    if (v[k] != Complex{0.0, 0.0}) t.emplace_back(k % dim, k / dim, v[k]);
  }
  SparseMatrix m(dim, dim);
  m.setFromTriplets(t.begin(), t.end());
  return SpinOperator{std::move(m), num_sites, std::nullopt};
}

SuperOperator::SuperOperator(SparseMatrix forward, bool hermitian)
    : forward_(std::move(forward)), hermitian_(hermitian) {
  forward_.makeCompressed();
  backward_ = SparseMatrix(forward_.adjoint());
  backward_.makeCompressed();
  operator_dim_ =
      static_cast<Index>(std::llround(std::sqrt(static_cast<double>(forward_.rows()))));
}

SuperOperator SuperOperator::adjoint() const {
  SuperOperator out;
  out.forward_ = backward_;
  out.backward_ = forward_;
  out.operator_dim_ = operator_dim_;
  out.hermitian_ = hermitian_;
  return out;
}

SuperOperator adjoint(const SuperOperator& s) { return s.adjoint(); }

SuperOperator build_liouvillian(const SpinOperator& hamiltonian) {
  require_hermitian(hamiltonian);
  const Index dim = hamiltonian.dimension();
  const SparseMatrix id = sparse_identity(dim);
  const SparseMatrix h_t = SparseMatrix(hamiltonian.matrix.transpose());
  SparseMatrix l = kron(id, hamiltonian.matrix) - kron(h_t, id);
  return SuperOperator(prune_small(std::move(l)), true);
}

SuperOperator build_lindbladian(const SpinOperator& hamiltonian,
                                std::span<const SpinOperator> jumps) {
  if (jumps.empty()) return build_liouvillian(hamiltonian);
  require_hermitian(hamiltonian);
  const Index dim = hamiltonian.dimension();
  const SparseMatrix id = sparse_identity(dim);
  const SparseMatrix h_t = SparseMatrix(hamiltonian.matrix.transpose());

  SparseMatrix sandwich(dim * dim, dim * dim);
  SparseMatrix decay(dim, dim);  // sum_k L_k^dagger L_k
  for (const SpinOperator& jump : jumps) {
    if (jump.dimension() != dim) {
      throw DimensionError("jump operator dimension does not match the Hamiltonian");
    }
    const SparseMatrix l_dag = SparseMatrix(jump.matrix.adjoint());
    const SparseMatrix l_t = SparseMatrix(jump.matrix.transpose());
    sandwich += kron(l_t, l_dag);
    decay += SparseMatrix(l_dag * jump.matrix);
  }
  const SparseMatrix decay_t = SparseMatrix(decay.transpose());

  SparseMatrix l = kron(id, hamiltonian.matrix) - kron(h_t, id);
  SparseMatrix dissipator = sandwich - 0.5 * kron(id, decay) - 0.5 * kron(decay_t, id);
  l -= kI * dissipator;
  return SuperOperator(prune_small(std::move(l)), false);
}

DenseMatrix apply_lindblad_direct(const DenseMatrix& hamiltonian,
                                  std::span<const DenseMatrix> jumps, const DenseMatrix& op) {
  DenseMatrix out = hamiltonian * op - op * hamiltonian;
  for (const DenseMatrix& jump : jumps) {
    const DenseMatrix l_dag = jump.adjoint();
    const DenseMatrix decay = l_dag * jump;
    out -= kI * (l_dag * op * jump - 0.5 * (decay * op + op * decay));
  }
  return out;
}

void write_triplets(std::ostream& out, const SuperOperator& s) {
  const auto old_precision = out.precision(17);
  const SparseMatrix& m = s.matrix();
  for (Index row = 0; row < m.outerSize(); ++row) {
    for (SparseMatrix::InnerIterator it(m, row); it; ++it) {
      out << it.row() << ' ' << it.col() << ' ' << it.value().real() << ' ' << it.value().imag()
          << '\n';
    }
  }
  out.precision(old_precision);
}

}  // namespace opkrylov
