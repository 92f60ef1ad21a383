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

#include "opkrylov/krylov.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace opkrylov {

namespace {

// J v for v = vec(O) is vec(O^dagger). Projects v onto J v = sign * v.
void project_parity(SuperVector& v, Index dim, double sign) {
  for (Index j = 0; j < dim; ++j) {
    Complex& d = v[j + j * dim];
    d = 0.5 * (d + sign * std::conj(d));
    for (Index i = j + 1; i < dim; ++i) {
      Complex& x = v[i + j * dim];
      Complex& y = v[j + i * dim];
      const Complex nx = 0.5 * (x + sign * std::conj(y));
      const Complex ny = 0.5 * (y + sign * std::conj(x));
      x = nx;
      y = ny;
    }
  }
}

SuperVector parity_image(const SuperVector& v, Index dim) {
  SuperVector out(v.size());
  for (Index j = 0; j < dim; ++j) {
    for (Index i = 0; i < dim; ++i) out[i + j * dim] = std::conj(v[j + i * dim]);
  }
  return out;
}

// +1 for a Hermitian seed, -1 for anti-Hermitian, 0 otherwise. Also requires the
// generator to anticommute with J on the seed, which holds for any adjoint-form
// Lindbladian with Hermitian H.
double seed_parity(const SuperOperator& gen, const SuperVector& seed) {
  const Index dim = gen.operator_dimension();
  if (dim * dim != seed.size()) return 0.0;
  const SuperVector image = parity_image(seed, dim);
  const double norm = seed.norm();
  double sign = 0.0;
  if ((image - seed).norm() <= 1e-12 * norm) {
    sign = 1.0;
  } else if ((image + seed).norm() <= 1e-12 * norm) {
    sign = -1.0;
  } else {
    return 0.0;
  }
  const SuperVector forward = gen * seed;
  const SuperVector mirrored = gen * image;
  const double scale = std::max(1.0, forward.norm());
  if ((mirrored + parity_image(forward, dim)).norm() > 1e-10 * scale) return 0.0;
  return sign;
}

// Removes the identity component: v -= (tr(v) / dim) vec(I).
void project_traceless(SuperVector& v, Index dim) {
  Complex tr = 0.0;
  for (Index j = 0; j < dim; ++j) tr += v[j + j * dim];
  tr /= static_cast<double>(dim);
  for (Index j = 0; j < dim; ++j) v[j + j * dim] -= tr;
}

// Traceless operators form an invariant subspace of L and L^dagger exactly when both
// annihilate the identity. The paper's jump sets (dephasing, paired sigma^+-) are unital.
bool traceless_invariant(const SuperOperator& gen, const SuperVector& seed) {
  const Index dim = gen.operator_dimension();
  if (dim * dim != seed.size()) return false;
  Complex tr = 0.0;
  for (Index j = 0; j < dim; ++j) tr += seed[j + j * dim];
  if (std::abs(tr) > 1e-12 * std::sqrt(static_cast<double>(dim))) return false;
  SuperVector id = SuperVector::Zero(seed.size());
  for (Index j = 0; j < dim; ++j) id[j + j * dim] = 1.0;
  SuperVector out(seed.size());
  const double scale = std::max(1.0, gen.matrix().norm()) * id.norm();
  gen.apply(id, out);
  if (out.norm() > 1e-12 * scale) return false;
  gen.apply_adjoint(id, out);
  return out.norm() <= 1e-12 * scale;
}

void check_seed(const SuperVector& seed, Index dim) {
  if (seed.size() != dim) {
    throw DimensionError("seed length " + std::to_string(seed.size()) +
                         " does not match generator dimension " + std::to_string(dim));
  }
  const double norm = seed.norm();
  if (std::abs(norm - 1.0) > 1e-10) {
    throw DomainError("seed must be normalized (norm " + std::to_string(norm) + ")");
  }
}

struct StepLimit {
  Index limit;
  Index bound;
};

// D^2 - D + 1 only bounds closed generators; open ones can use the whole space.
StepLimit step_limit(Index super_dim, Index operator_dim, bool hermitian, Index max_steps) {
  Index bound = super_dim;
  if (hermitian && operator_dim > 0 && operator_dim * operator_dim == super_dim) {
    bound = std::min(bound, krylov_dimension_bound(operator_dim));
  }
  const Index limit = max_steps > 0 ? std::min(max_steps, bound) : bound;
  return {limit, bound};
}

Termination limit_reason(Index max_steps, Index steps) {
  return (max_steps > 0 && steps >= max_steps) ? Termination::MaxSteps
                                               : Termination::DimensionBound;
}

void check_memory(Index super_dim, Index columns, std::size_t cap, int bases) {
  const std::size_t need = basis_memory_estimate(super_dim, columns) / 2 * bases;
  if (need > cap) {
    throw ResourceError("Krylov basis storage needs " + std::to_string(need >> 20) +
                        " MiB, above the cap of " + std::to_string(cap >> 20) + " MiB");
  }
}

// Two classical Gram-Schmidt passes: p -= P (Q^H p), q -= Q (P^H q).
void reorthogonalize(const DenseMatrix& P, const DenseMatrix& Q, Index j, SuperVector& p,
                     SuperVector& q, Vector& work) {
  for (int pass = 0; pass < 2; ++pass) {
    work.noalias() = Q.leftCols(j).adjoint() * p;
    p.noalias() -= P.leftCols(j) * work;
    work.noalias() = P.leftCols(j).adjoint() * q;
    q.noalias() -= Q.leftCols(j) * work;
  }
}

void orthogonalize(const DenseMatrix& V, Index j, SuperVector& v, Vector& work) {
  for (int pass = 0; pass < 2; ++pass) {
    work.noalias() = V.leftCols(j).adjoint() * v;
    v.noalias() -= V.leftCols(j) * work;
  }
}

void shrink(DenseMatrix& m, Index cols) {
  if (m.cols() != cols) m.conservativeResize(Eigen::NoChange, cols);
}

}  // namespace

const char* termination_label(Termination t) {
  switch (t) {
    case Termination::Breakdown:
      return "breakdown";
    case Termination::MaxSteps:
      return "max_steps";
    case Termination::DimensionBound:
      return "dimension_bound";
  }
  return "unknown";
}

DenseMatrix TridiagonalData::dense() const {
  const Index k = krylov_dim();
  DenseMatrix t = DenseMatrix::Zero(k, k);
  for (Index n = 0; n < k; ++n) t(n, n) = a[n];
  for (Index n = 1; n < k; ++n) {
    t(n - 1, n) = b[n - 1];
    t(n, n - 1) = c[n - 1];
  }
  return t;
}

Index krylov_dimension_bound(Index hilbert_dim) {
  if (hilbert_dim < 1) throw DomainError("Hilbert dimension must be positive");
  return hilbert_dim * hilbert_dim - hilbert_dim + 1;
}

std::size_t basis_memory_estimate(Index super_dim, Index columns) {
  return 2 * static_cast<std::size_t>(super_dim) * static_cast<std::size_t>(columns) *
         sizeof(Complex);
}

KrylovResult bilanczos(const SuperOperator& gen, const SuperVector& seed,
                       const IterationOptions& opt) {
  const Index n = gen.dimension();
  check_seed(seed, n);
  auto [limit, bound] = step_limit(n, gen.operator_dimension(), gen.is_hermitian(), opt.max_steps);
  const bool traceless = opt.preserve_trace && traceless_invariant(gen, seed);
  if (traceless) {
    bound = std::min(bound, n - 1);
    limit = std::min(limit, bound);
  }
  const bool full = opt.reorth == Reorthogonalization::Full;
  const bool keep = full || opt.store_bases;
  const Index capacity = keep ? limit : 0;
  check_memory(n, capacity, opt.memory_cap_bytes, 2);

  KrylovResult out;
  TridiagonalData& t = out.data;
  IterationDiagnostics& diag = t.diagnostics;

  const double parity = opt.preserve_hermiticity ? seed_parity(gen, seed) : 0.0;
  diag.parity_projection = parity != 0.0;
  diag.trace_projection = traceless;
  const Index dim = gen.operator_dimension();

  DenseMatrix P(n, capacity);
  DenseMatrix Q(n, capacity);
  SuperVector p = seed;
  SuperVector q = seed;
  SuperVector p_prev = SuperVector::Zero(n);
  SuperVector q_prev = SuperVector::Zero(n);
  SuperVector rp(n), sp(n), r(n), s(n);
  Vector work;
  if (keep) {
    P.col(0) = p;
    Q.col(0) = q;
  }

  gen.apply(p, rp);
  gen.apply_adjoint(q, sp);
  if (rp.norm() <= kDropTolerance && sp.norm() <= kDropTolerance) {
    throw BreakdownError("seed is annihilated by the generator", 0);
  }
  Complex a = q.dot(rp);
  t.a.push_back(a);
  r = rp - a * p;
  s = sp - std::conj(a) * q;

  double c_max = 0.0;
  for (Index j = 1;; ++j) {
    if (j >= limit) {
      t.termination = limit_reason(opt.max_steps, j);
      break;
    }
    // Clean the residuals before omega: contamination along earlier vectors can fake or
    // hide a breakdown once ||p|| ||q|| is large.
    if (full) reorthogonalize(P, Q, j, r, s, work);
    if (parity != 0.0) {
      const double sign = (j % 2 == 0) ? parity : -parity;
      project_parity(r, dim, sign);
      project_parity(s, dim, sign);
    }
    if (traceless) {
      project_traceless(r, dim);
      project_traceless(s, dim);
    }
    const Complex omega = r.dot(s);
    const double c = std::sqrt(std::abs(omega));
    const double scale = std::max(1.0, c_max);
    if (c <= opt.breakdown_tol * scale) {
      t.termination = Termination::Breakdown;
      const double loud = std::sqrt(opt.breakdown_tol) * scale;
      diag.serious_breakdown = r.norm() > loud && s.norm() > loud;
      break;
    }
    c_max = std::max(c_max, c);
    const Complex b = std::conj(omega) / c;
    if (omega.real() < 0.0) ++diag.negative_omega_steps;

    p_prev.swap(p);
    q_prev.swap(q);
    p = r / c;
    q = s / std::conj(b);
    double defect = std::abs(q.dot(p) - 1.0);
    if (full) {
      work.noalias() = Q.leftCols(j).adjoint() * p;
      defect = std::max(defect, work.cwiseAbs().maxCoeff());
    }
    diag.max_step_defect = std::max(diag.max_step_defect, defect);
    if (full && defect > opt.reorth_failure) throw ReorthogonalizationError(j, defect);
    diag.max_norm_product = std::max(diag.max_norm_product, p.norm() * q.norm());
    if (keep) {
      P.col(j) = p;
      Q.col(j) = q;
    }
    t.b.push_back(b);
    t.c.push_back(c);

    gen.apply(p, rp);
    gen.apply_adjoint(q, sp);
    a = q.dot(rp);
    t.a.push_back(a);
    r = rp - a * p - b * p_prev;
    s = sp - std::conj(a) * q - c * q_prev;
    if (opt.progress) opt.progress(j);
  }
  diag.final_residual_r = r.norm();
  diag.final_residual_s = s.norm();

  if (opt.store_bases) {
    shrink(P, t.krylov_dim());
    shrink(Q, t.krylov_dim());
    out.bases = KrylovBases{std::move(P), std::move(Q), true};
  }
  return out;
}

KrylovResult lanczos(const SuperOperator& gen, const SuperVector& seed,
                     const IterationOptions& opt) {
  const Index n = gen.dimension();
  check_seed(seed, n);
  if (!gen.is_hermitian()) {
    const double scale = std::max(1.0, gen.matrix().norm());
    if (SparseMatrix(gen.matrix() - gen.adjoint_matrix()).norm() > 1e-12 * scale) {
      throw DomainError("lanczos needs a Hermitian generator; use bilanczos for open systems");
    }
  }
  const auto [limit, bound] = step_limit(n, gen.operator_dimension(), true, opt.max_steps);
  const bool full = opt.reorth == Reorthogonalization::Full;
  const bool keep = full || opt.store_bases;
  const Index capacity = keep ? limit : 0;
  check_memory(n, capacity, opt.memory_cap_bytes, 1);

  KrylovResult out;
  TridiagonalData& t = out.data;
  DenseMatrix V(n, capacity);
  SuperVector v = seed;
  SuperVector v_prev = SuperVector::Zero(n);
  SuperVector w(n);
  Vector work;
  if (keep) V.col(0) = v;

  gen.apply(v, w);
  double alpha = v.dot(w).real();
  t.a.emplace_back(alpha, 0.0);
  w -= alpha * v;

  double beta_max = 0.0;
  double beta_prev = 0.0;
  for (Index j = 1;; ++j) {
    if (j >= limit) {
      t.termination = limit_reason(opt.max_steps, j);
      break;
    }
    if (full) orthogonalize(V, j, w, work);
    const double beta = w.norm();
    if (beta <= opt.breakdown_tol * std::max(1.0, beta_max)) {
      t.termination = Termination::Breakdown;
      break;
    }
    beta_max = std::max(beta_max, beta);
    v_prev.swap(v);
    v = w / beta;
    if (keep) V.col(j) = v;
    t.b.emplace_back(beta, 0.0);
    t.c.push_back(beta);
    beta_prev = beta;

    gen.apply(v, w);
    alpha = v.dot(w).real();
    t.a.emplace_back(alpha, 0.0);
    w -= alpha * v + beta_prev * v_prev;
    if (opt.progress) opt.progress(j);
  }
  t.diagnostics.final_residual_r = w.norm();
  t.diagnostics.final_residual_s = t.diagnostics.final_residual_r;

  if (opt.store_bases) {
    shrink(V, t.krylov_dim());
    out.bases = KrylovBases{V, V, true};
  }
  return out;
}

std::vector<double> HessenbergData::subdiagonal_magnitudes() const {
  std::vector<double> out;
  for (Index n = 1; n < h.rows(); ++n) out.push_back(std::abs(h(n, n - 1)));
  return out;
}

HessenbergData arnoldi(const SuperOperator& gen, const SuperVector& seed,
                       const IterationOptions& opt) {
  const Index n = gen.dimension();
  check_seed(seed, n);
  const auto [limit, bound] = step_limit(n, gen.operator_dimension(), gen.is_hermitian(), opt.max_steps);
  check_memory(n, limit, opt.memory_cap_bytes, 1);

  DenseMatrix V(n, limit);
  DenseMatrix h = DenseMatrix::Zero(limit, limit);
  V.col(0) = seed;
  SuperVector w(n);
  Vector coeffs;
  HessenbergData out;
  Index k = 1;
  double h_max = 0.0;
  for (Index j = 0;; ++j) {
    gen.apply(V.col(j), w);
    Vector column = Vector::Zero(j + 1);
    for (int pass = 0; pass < 2; ++pass) {
      coeffs.noalias() = V.leftCols(j + 1).adjoint() * w;
      w.noalias() -= V.leftCols(j + 1) * coeffs;
      column += coeffs;
    }
    h.col(j).head(j + 1) = column;
    if (j + 1 >= limit) {
      out.termination = limit_reason(opt.max_steps, j + 1);
      break;
    }
    const double sub = w.norm();
    if (sub <= opt.breakdown_tol * std::max(1.0, h_max)) {
      out.termination = Termination::Breakdown;
      break;
    }
    h_max = std::max(h_max, sub);
    h(j + 1, j) = sub;
    V.col(j + 1) = w / sub;
    k = j + 2;
  }
  out.h = h.topLeftCorner(k, k);
  if (opt.store_bases) out.basis = V.leftCols(k);
  return out;
}

EffectiveTridiagonal effective_tridiagonal(const TridiagonalData& t, double phase_tolerance) {
  double scale = 0.0;
  for (const Complex& a : t.a) scale = std::max(scale, std::abs(a));
  for (double c : t.c) scale = std::max(scale, c);

  EffectiveTridiagonal out;
  out.abs_a.reserve(t.a.size());
  for (std::size_t n = 0; n < t.a.size(); ++n) {
    if (std::abs(t.a[n].real()) > phase_tolerance * scale) {
      throw DomainError("diagonal a_" + std::to_string(n) + " has real part " +
                        std::to_string(t.a[n].real()) + " beyond tolerance");
    }
    out.abs_a.push_back(t.a[n].imag());
    if (t.a[n].imag() < -phase_tolerance * scale) ++out.negative_diagonals;
  }
  for (std::size_t n = 0; n < t.b.size(); ++n) {
    const double mag = std::abs(t.b[n]);
    const double c = t.c[n];
    if (std::abs(mag - c) > phase_tolerance * std::max(c, mag)) {
      throw DomainError("|b_" + std::to_string(n + 1) + "| differs from c_" +
                        std::to_string(n + 1) + " beyond tolerance");
    }
    out.abs_b.push_back(mag);
    out.signed_b.push_back(t.b[n].real() < 0.0 ? -mag : mag);
    out.phase_residual.push_back(mag > 0.0 ? std::abs(t.b[n].imag()) / mag : 0.0);
  }
  return out;
}

double biorthonormality_residual(const KrylovBases& bases) {
  if (!bases.stored) throw DomainError("bases were not stored");
  const Index k = bases.P.cols();
  constexpr Index kBlock = 256;
  double worst = 0.0;
  for (Index start = 0; start < k; start += kBlock) {
    const Index width = std::min(kBlock, k - start);
    DenseMatrix g = bases.Q.adjoint() * bases.P.middleCols(start, width);
    for (Index col = 0; col < width; ++col) g(start + col, col) -= 1.0;
    worst = std::max(worst, g.cwiseAbs().maxCoeff());
  }
  return worst;
}

double reconstruction_residual(const SuperOperator& gen, const KrylovBases& bases,
                               const TridiagonalData& t) {
  if (!bases.stored) throw DomainError("bases were not stored");
  const DenseMatrix lp = gen.matrix() * bases.P;
  const DenseMatrix projected = bases.Q.adjoint() * lp;
  return (projected - t.dense()).cwiseAbs().maxCoeff();
}

KrylovResult bilanczos_state(const SparseMatrix& h, const Vector& seed,
                             const IterationOptions& opt) {
  const Index n = h.rows();
  if (h.cols() != n) throw DimensionError("Hamiltonian must be square");
  check_seed(seed, n);
  const Index limit = opt.max_steps > 0 ? std::min(opt.max_steps, n) : n;
  check_memory(n, limit, opt.memory_cap_bytes, 2);
  const SparseMatrix h_dag = h.adjoint();

  KrylovResult out;
  TridiagonalData& t = out.data;
  DenseMatrix P(n, limit);
  DenseMatrix Qb(n, limit);
  Vector p = seed;
  Vector q = seed;
  Vector p_prev = Vector::Zero(n);
  Vector q_prev = Vector::Zero(n);
  Vector work;
  P.col(0) = p;
  Qb.col(0) = q;

  double sub_max = 0.0;
  for (Index j = 0;; ++j) {
    const Vector hq = h * q;
    const Complex a = p.dot(hq);
    t.a.push_back(a);
    if (j + 1 >= limit) {
      t.termination = limit_reason(opt.max_steps, j + 1);
      break;
    }
    Vector big_q = hq - a * q;
    Vector big_p = h_dag * p - std::conj(a) * p;
    if (j > 0) {
      big_q -= t.b[j - 1] * q_prev;
      big_p -= t.c[j - 1] * p_prev;
    }
    reorthogonalize(Qb, P, j + 1, big_q, big_p, work);

    const double sub = big_q.norm();
    const double scale = std::max(1.0, sub_max);
    if (sub <= opt.breakdown_tol * scale) {
      t.termination = Termination::Breakdown;
      break;
    }
    const Complex overlap = big_p.dot(big_q);
    if (std::abs(overlap) <= opt.breakdown_tol * scale * std::max(1.0, big_p.norm())) {
      t.termination = Termination::Breakdown;
      t.diagnostics.serious_breakdown = true;
      break;
    }
    sub_max = std::max(sub_max, sub);
    const Complex super = overlap / sub;
    t.c.push_back(sub);
    t.b.push_back(super);
    p_prev.swap(p);
    q_prev.swap(q);
    q = big_q / sub;
    p = big_p / std::conj(super);
    P.col(j + 1) = p;
    Qb.col(j + 1) = q;
    if (opt.progress) opt.progress(j + 1);
  }
  if (opt.store_bases) {
    shrink(P, t.krylov_dim());
    shrink(Qb, t.krylov_dim());
    out.bases = KrylovBases{std::move(P), std::move(Qb), true};
  }
  return out;
}

}  // namespace opkrylov
