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

#include "opkrylov/spin_algebra.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

namespace opkrylov {

namespace {

using Triplet = Eigen::Triplet<Complex>;

void check_sites(int num_sites) {
  if (num_sites < 1) {
    throw DomainError("number of sites must be positive, got " + std::to_string(num_sites));
  }
  if (num_sites > kMaxSites) {
    throw ResourceError("N = " + std::to_string(num_sites) + " exceeds the " +
                        std::to_string(kMaxSites) + "-site memory guard");
  }
}

void check_site_index(int site, int num_sites) {
  if (site < 1 || site > num_sites) {
    throw DomainError("site index " + std::to_string(site) + " outside 1.." +
                      std::to_string(num_sites));
  }
}

void check_rate(double rate, const char* name) {
  if (!(rate >= 0.0)) {
    throw DomainError(std::string(name) + " must be non-negative");
  }
}

// Single-site action: returns false when the factor annihilates |bit>.
bool apply_factor(PauliAxis axis, unsigned& bit, Complex& amplitude) {
  switch (axis) {
    case PauliAxis::I:
      return true;
    case PauliAxis::X:
      bit ^= 1U;
      return true;
    case PauliAxis::Y:
      amplitude *= bit == 0U ? kI : -kI;
      bit ^= 1U;
      return true;
    case PauliAxis::Z:
      if (bit == 1U) amplitude = -amplitude;
      return true;
    case PauliAxis::Plus:
      if (bit == 0U) return false;
      bit = 0U;
      return true;
    case PauliAxis::Minus:
      if (bit == 1U) return false;
      bit = 1U;
      return true;
  }
  return false;
}

void append_string(std::vector<Triplet>& triplets, const PauliString& spec) {
  const int n = spec.num_sites();
  const std::uint64_t dim = std::uint64_t{1} << n;
  for (std::uint64_t col = 0; col < dim; ++col) {
    std::uint64_t row = col;
    Complex amplitude = spec.coefficient;
    bool alive = true;
    for (int j = 1; j <= n && alive; ++j) {
      const int pos = n - j;
      unsigned bit = static_cast<unsigned>((row >> pos) & 1U);
      alive = apply_factor(spec.factors[j - 1], bit, amplitude);
      row = (row & ~(std::uint64_t{1} << pos)) | (std::uint64_t{bit} << pos);
    }
    if (alive && std::abs(amplitude) > 0.0) {
      triplets.emplace_back(static_cast<Index>(row), static_cast<Index>(col), amplitude);
    }
  }
}

SpinOperator assemble(int num_sites, const std::vector<Triplet>& triplets) {
  const Index dim = Index{1} << num_sites;
  SparseMatrix m(dim, dim);
  m.setFromTriplets(triplets.begin(), triplets.end());
  return SpinOperator{prune_small(std::move(m)), num_sites, std::nullopt};
}

double max_abs(const SparseMatrix& m) {
  double out = 0.0;
  for (Index k = 0; k < m.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(m, k); it; ++it) {
      out = std::max(out, std::abs(it.value()));
    }
  }
  return out;
}

}  // namespace

char axis_label(PauliAxis axis) {
  switch (axis) {
    case PauliAxis::I: return 'I';
    case PauliAxis::X: return 'X';
    case PauliAxis::Y: return 'Y';
    case PauliAxis::Z: return 'Z';
    case PauliAxis::Plus: return '+';
    case PauliAxis::Minus: return '-';
  }
  return '?';
}

PauliAxis axis_from_label(char label) {
  switch (label) {
    case 'I': case 'i': return PauliAxis::I;
    case 'X': case 'x': return PauliAxis::X;
    case 'Y': case 'y': return PauliAxis::Y;
    case 'Z': case 'z': return PauliAxis::Z;
    case '+': return PauliAxis::Plus;
    case '-': return PauliAxis::Minus;
    default: break;
  }
  throw DomainError(std::string("unknown Pauli label '") + label + "'");
}

std::vector<int> PauliString::support() const {
  std::vector<int> sites;
  for (int j = 0; j < num_sites(); ++j) {
    if (factors[j] != PauliAxis::I) sites.push_back(j + 1);
  }
  return sites;
}

PauliString PauliString::identity(int num_sites) {
  check_sites(num_sites);
  return PauliString{std::vector<PauliAxis>(num_sites, PauliAxis::I), 1.0};
}

PauliString PauliString::single(int num_sites, int site, PauliAxis axis, Complex coefficient) {
  const std::pair<int, PauliAxis> factor{site, axis};
  return product(num_sites, std::span(&factor, 1), coefficient);
}

PauliString PauliString::product(int num_sites, std::span<const std::pair<int, PauliAxis>> factors,
                                 Complex coefficient) {
  PauliString out = identity(num_sites);
  out.coefficient = coefficient;
  for (const auto& [site, axis] : factors) {
    check_site_index(site, num_sites);
    if (out.factors[site - 1] != PauliAxis::I) {
      throw DomainError("site " + std::to_string(site) + " listed twice in a Pauli product");
    }
    out.factors[site - 1] = axis;
  }
  return out;
}

SpinOperator build_pauli_operator(const PauliString& spec) {
  check_sites(spec.num_sites());
  std::vector<Triplet> triplets;
  triplets.reserve(std::size_t{1} << spec.num_sites());
  append_string(triplets, spec);
  return assemble(spec.num_sites(), triplets);
}

SpinOperator identity_operator(int num_sites) {
  return build_pauli_operator(PauliString::identity(num_sites));
}

SpinOperator build_tfim_hamiltonian(int num_sites, double g, double h) {
  check_sites(num_sites);
  std::vector<Triplet> triplets;
  for (int j = 1; j < num_sites; ++j) {
    const std::pair<int, PauliAxis> zz[] = {{j, PauliAxis::Z}, {j + 1, PauliAxis::Z}};
    append_string(triplets, PauliString::product(num_sites, zz, -1.0));
  }
  for (int j = 1; j <= num_sites; ++j) {
    if (g != 0.0) append_string(triplets, PauliString::single(num_sites, j, PauliAxis::X, -g));
    if (h != 0.0) append_string(triplets, PauliString::single(num_sites, j, PauliAxis::Z, -h));
  }
  return assemble(num_sites, triplets);
}

SpinOperator build_xxz_hamiltonian(int num_sites, double J, double Jzz, double epsilon,
                                   int defect_site) {
  if (num_sites < 2) throw DomainError("XXZ chain needs at least two sites");
  check_sites(num_sites);
  check_site_index(defect_site, num_sites);
  std::vector<Triplet> triplets;
  for (int i = 1; i < num_sites; ++i) {
    for (PauliAxis axis : {PauliAxis::X, PauliAxis::Y, PauliAxis::Z}) {
      const double coupling = axis == PauliAxis::Z ? Jzz : J;
      if (coupling == 0.0) continue;
      const std::pair<int, PauliAxis> pair[] = {{i, axis}, {i + 1, axis}};
      append_string(triplets, PauliString::product(num_sites, pair, 0.25 * coupling));
    }
  }
  if (epsilon != 0.0) {
    append_string(triplets,
                  PauliString::single(num_sites, defect_site, PauliAxis::Z, 0.5 * epsilon));
  }
  return assemble(num_sites, triplets);
}

std::vector<SpinOperator> build_tfim_jump_operators(int num_sites, double alpha, double gamma) {
  check_sites(num_sites);
  check_rate(alpha, "alpha");
  check_rate(gamma, "gamma");
  std::vector<SpinOperator> jumps;
  if (alpha > 0.0) {
    const double amp = std::sqrt(alpha);
    for (int site : {1, num_sites}) {
      jumps.push_back(build_pauli_operator(PauliString::single(num_sites, site, PauliAxis::Plus, amp)));
      jumps.push_back(build_pauli_operator(PauliString::single(num_sites, site, PauliAxis::Minus, amp)));
    }
  }
  if (gamma > 0.0) {
    const double amp = std::sqrt(gamma);
    for (int i = 1; i <= num_sites; ++i) {
      jumps.push_back(build_pauli_operator(PauliString::single(num_sites, i, PauliAxis::Z, amp)));
    }
  }
  return jumps;
}

namespace {

// sigma^x_i sigma^x_{i+1} + sigma^y_i sigma^y_{i+1}, appended with a scale.
void append_hopping(std::vector<Triplet>& triplets, int num_sites, int i, double scale) {
  for (PauliAxis axis : {PauliAxis::X, PauliAxis::Y}) {
    const std::pair<int, PauliAxis> pair[] = {{i, axis}, {i + 1, axis}};
    append_string(triplets, PauliString::product(num_sites, pair, scale));
  }
}

}  // namespace

std::vector<SpinOperator> build_xxz_jump_operators(int num_sites, double alpha, double gamma,
                                                   JumpForm form) {
  if (num_sites < 3) throw DomainError("XXZ jump operators need at least three sites");
  check_sites(num_sites);
  check_rate(alpha, "alpha");
  check_rate(gamma, "gamma");
  std::vector<SpinOperator> jumps;
  const int n = num_sites;

  if (form == JumpForm::AsWritten) {
    if (alpha > 0.0) {
      for (int i : {1, n - 1}) {
        std::vector<Triplet> t;
        append_hopping(t, n, i, std::sqrt(alpha));
        jumps.push_back(assemble(n, t));
      }
    }
    if (gamma > 0.0) {
      for (int i = 1; i <= n; ++i) {
        jumps.push_back(
            build_pauli_operator(PauliString::single(n, i, PauliAxis::Z, std::sqrt(gamma))));
      }
    }
    return jumps;
  }

  if (alpha > 0.0) {
    std::vector<Triplet> t;
    append_hopping(t, n, 1, std::sqrt(alpha / 2.0));
    append_hopping(t, n, n - 1, std::sqrt(alpha / 2.0));
    jumps.push_back(assemble(n, t));
  }
  if (gamma > 0.0) {
    for (int i = 1; 2 * i <= n; ++i) {
      const int mirror = n + 1 - i;
      if (mirror == i) break;
      std::vector<Triplet> t;
      append_string(t, PauliString::single(n, i, PauliAxis::Z, std::sqrt(gamma / 2.0)));
      append_string(t, PauliString::single(n, mirror, PauliAxis::Z, std::sqrt(gamma / 2.0)));
      jumps.push_back(assemble(n, t));
    }
    if (n % 2 == 1) {
      jumps.push_back(
          build_pauli_operator(PauliString::single(n, (n + 1) / 2, PauliAxis::Z, std::sqrt(gamma))));
    }
  }
  return jumps;
}

SparseMatrix total_sz(int num_sites) {
  check_sites(num_sites);
  const Index dim = Index{1} << num_sites;
  SparseMatrix m(dim, dim);
  std::vector<Triplet> t;
  for (Index b = 0; b < dim; ++b) {
    const int down = std::popcount(static_cast<std::uint64_t>(b));
    const double sz = 0.5 * (num_sites - 2 * down);
    if (sz != 0.0) t.emplace_back(b, b, sz);
  }
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

namespace {

std::uint64_t reflect_bits(std::uint64_t b, int num_sites) {
  std::uint64_t out = 0;
  for (int k = 0; k < num_sites; ++k) {
    if ((b >> k) & 1U) out |= std::uint64_t{1} << (num_sites - 1 - k);
  }
  return out;
}

}  // namespace

SparseMatrix site_reflection(int num_sites) {
  check_sites(num_sites);
  const Index dim = Index{1} << num_sites;
  SparseMatrix m(dim, dim);
  std::vector<Triplet> t;
  t.reserve(dim);
  for (Index b = 0; b < dim; ++b) {
    t.emplace_back(static_cast<Index>(reflect_bits(b, num_sites)), b, 1.0);
  }
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

SectorBasis build_sector_basis(int num_sites, double total_spin, int parity) {
  check_sites(num_sites);
  const double twice = 2.0 * total_spin;
  const int twice_spin = static_cast<int>(std::lround(twice));
  if (std::abs(twice - twice_spin) > 1e-9 || (num_sites + twice_spin) % 2 != 0 ||
      std::abs(twice_spin) > num_sites) {
    throw DomainError("total spin " + std::to_string(total_spin) + " incompatible with N = " +
                      std::to_string(num_sites));
  }
  if (parity != 1 && parity != -1) throw DomainError("parity must be +1 or -1");

  const int n_up = (num_sites + twice_spin) / 2;
  const int n_down = num_sites - n_up;
  const Index dim = Index{1} << num_sites;
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

  std::vector<Triplet> t;
  Index col = 0;
  for (Index b = 0; b < dim; ++b) {
    const auto state = static_cast<std::uint64_t>(b);
    if (std::popcount(state) != n_down) continue;
    const auto mirror = reflect_bits(state, num_sites);
    if (mirror < state) continue;
    if (mirror == state) {
      if (parity == 1) t.emplace_back(b, col++, 1.0);
      continue;
    }
    t.emplace_back(b, col, inv_sqrt2);
    t.emplace_back(static_cast<Index>(mirror), col, parity * inv_sqrt2);
    ++col;
  }
  SectorBasis basis;
  basis.num_sites = num_sites;
  basis.label = SectorLabel{twice_spin, parity};
  basis.vectors.resize(dim, col);
  basis.vectors.setFromTriplets(t.begin(), t.end());
  return basis;
}

SpinOperator project_to_sector(const SpinOperator& op, const SectorBasis& basis, double tolerance) {
  if (!op.is_full_space()) throw DomainError("operator is already restricted to a sector");
  if (op.dimension() != basis.vectors.rows()) {
    throw DimensionError("operator dimension does not match the sector basis");
  }
  const double scale = std::max(1.0, max_abs(op.matrix));
  const double sz_violation = commutator_max(op.matrix, total_sz(basis.num_sites));
  if (sz_violation > tolerance * scale) throw SymmetryError("total magnetization", sz_violation);
  const double p_violation = commutator_max(op.matrix, site_reflection(basis.num_sites));
  if (p_violation > tolerance * scale) throw SymmetryError("site reflection", p_violation);

  SparseMatrix restricted = basis.vectors.adjoint() * op.matrix * basis.vectors;
  return SpinOperator{prune_small(std::move(restricted)), op.num_sites, basis.label};
}

SpinOperator embed_from_sector(const SpinOperator& op, const SectorBasis& basis) {
  if (op.dimension() != basis.dimension()) {
    throw DimensionError("sector operator dimension does not match the basis");
  }
  SparseMatrix full = basis.vectors * op.matrix * basis.vectors.adjoint();
  return SpinOperator{prune_small(std::move(full)), basis.num_sites, std::nullopt};
}

Complex frobenius_inner(const SpinOperator& a, const SpinOperator& b) {
  if (a.dimension() != b.dimension() || a.matrix.cols() != b.matrix.cols()) {
    throw DimensionError("frobenius_inner: dimension mismatch");
  }
  const Complex trace = a.matrix.conjugate().cwiseProduct(b.matrix).sum();
  return trace / static_cast<double>(a.dimension());
}

double frobenius_norm(const SpinOperator& op) {
  return std::sqrt(std::max(0.0, frobenius_inner(op, op).real()));
}

SpinOperator normalized(const SpinOperator& op) {
  const double norm = frobenius_norm(op);
  if (norm == 0.0) throw DomainError("cannot normalize the zero operator");
  SpinOperator out = op;
  out.matrix /= norm;
  return out;
}

SpinOperator adjoint(const SpinOperator& op) {
  SpinOperator out = op;
  out.matrix = SparseMatrix(op.matrix.adjoint());
  return out;
}

SpinOperator operator+(const SpinOperator& a, const SpinOperator& b) {
  if (a.dimension() != b.dimension()) throw DimensionError("operator sum: dimension mismatch");
  SpinOperator out = a;
  out.matrix = prune_small(a.matrix + b.matrix);
  return out;
}

SpinOperator operator*(Complex scale, const SpinOperator& op) {
  SpinOperator out = op;
  out.matrix *= scale;
  out.matrix = prune_small(std::move(out.matrix));
  return out;
}

double commutator_max(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.cols() != b.rows() || b.cols() != a.rows()) {
    throw DimensionError("commutator: dimension mismatch");
  }
  const SparseMatrix c = a * b - b * a;
  return max_abs(c);
}

double hermiticity_defect(const SparseMatrix& a) {
  const SparseMatrix d = a - SparseMatrix(a.adjoint());
  return max_abs(d);
}

SparseMatrix prune_small(SparseMatrix m, double tolerance) {
  m.prune([tolerance](Index, Index, const Complex& v) { return std::abs(v) >= tolerance; });
  m.makeCompressed();
  return m;
}

}  // namespace opkrylov
