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

#include <bit>

#include "opkrylov/spin_algebra.hpp"

namespace opkrylov {

namespace {

// In-place Walsh-Hadamard transform: f(z) <- sum_b (-1)^{|b & z|} f(b).
void walsh_hadamard(std::vector<Complex>& f) {
  const std::size_t n = f.size();
  for (std::size_t half = 1; half < n; half <<= 1) {
    for (std::size_t block = 0; block < n; block += 2 * half) {
      for (std::size_t k = block; k < block + half; ++k) {
        const Complex u = f[k];
        const Complex v = f[k + half];
        f[k] = u + v;
        f[k + half] = u - v;
      }
    }
  }
}

const Complex kMinusIPowers[4] = {{1.0, 0.0}, {0.0, -1.0}, {-1.0, 0.0}, {0.0, 1.0}};

PauliAxis axis_of(std::uint32_t x_bit, std::uint32_t z_bit) {
  if (x_bit && z_bit) return PauliAxis::Y;
  if (x_bit) return PauliAxis::X;
  if (z_bit) return PauliAxis::Z;
  return PauliAxis::I;
}

}  // namespace

int PauliTerm::support_size() const {
  int size = 0;
  for (PauliAxis a : factors) size += a != PauliAxis::I ? 1 : 0;
  return size;
}

// c(x, z) = (-i)^{|x & z|} / D * sum_b (-1)^{|b & z|} O[b ^ x, b]
PauliCoefficients pauli_coefficients(const DenseMatrix& op, int num_sites) {
  const std::size_t dim = std::size_t{1} << num_sites;
  if (static_cast<std::size_t>(op.rows()) != dim || static_cast<std::size_t>(op.cols()) != dim) {
    throw DimensionError("Pauli decomposition needs a full-space 2^N x 2^N operator");
  }
  PauliCoefficients out;
  out.num_sites = num_sites;
  out.values.resize(dim * dim);
  std::vector<Complex> f(dim);
  const double inv_dim = 1.0 / static_cast<double>(dim);
  for (std::size_t x = 0; x < dim; ++x) {
    for (std::size_t b = 0; b < dim; ++b) {
      f[b] = op(static_cast<Index>(b ^ x), static_cast<Index>(b));
    }
    walsh_hadamard(f);
    for (std::size_t z = 0; z < dim; ++z) {
      const int ys = std::popcount(x & z) & 3;
      out.values[(x << num_sites) | z] = kMinusIPowers[ys] * f[z] * inv_dim;
    }
  }
  return out;
}

PauliCoefficients pauli_coefficients(const SpinOperator& op) {
  if (!op.is_full_space()) {
    throw DomainError("Pauli decomposition is defined on the full spin space only");
  }
  return pauli_coefficients(DenseMatrix(op.matrix), op.num_sites);
}

std::vector<PauliTerm> pauli_decompose(const SpinOperator& op, double tolerance) {
  const PauliCoefficients table = pauli_coefficients(op);
  const int n = op.num_sites;
  const std::uint32_t dim = std::uint32_t{1} << n;
  std::vector<PauliTerm> terms;
  for (std::uint32_t x = 0; x < dim; ++x) {
    for (std::uint32_t z = 0; z < dim; ++z) {
      const Complex c = table.at(x, z);
      if (std::abs(c) <= tolerance) continue;
      PauliTerm term{std::vector<PauliAxis>(n), c};
      for (int j = 1; j <= n; ++j) {
        const int pos = n - j;
        term.factors[j - 1] = axis_of((x >> pos) & 1U, (z >> pos) & 1U);
      }
      terms.push_back(std::move(term));
    }
  }
  return terms;
}

SpinOperator pauli_resum(std::span<const PauliTerm> terms, int num_sites) {
  const Index dim = Index{1} << num_sites;
  SparseMatrix sum(dim, dim);
  for (const PauliTerm& term : terms) {
    if (static_cast<int>(term.factors.size()) != num_sites) {
      throw DimensionError("Pauli term length does not match the chain");
    }
    sum += build_pauli_operator(PauliString{term.factors, term.coefficient}).matrix;
  }
  return SpinOperator{prune_small(std::move(sum)), num_sites, std::nullopt};
}

}  // namespace opkrylov
