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

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <vector>

#include "opkrylov/krylov.hpp"
#include "opkrylov/liouville.hpp"
#include "opkrylov/spin_algebra.hpp"

namespace opkrylov {
namespace {

SpinOperator pauli(int n, int site, PauliAxis axis, Complex c = 1.0) {
  return build_pauli_operator(PauliString::single(n, site, axis, c));
}

SuperVector seed_of(const SpinOperator& op) {
  SuperVector v = vectorize(op);
  return v / v.norm();
}

SuperOperator open_tfim(int n, double g, double h, double alpha, double gamma) {
  return build_lindbladian(build_tfim_hamiltonian(n, g, h), build_tfim_jump_operators(n, alpha, gamma));
}

TEST(KrylovBound, Values) {
  EXPECT_EQ(krylov_dimension_bound(64), 4033);
  EXPECT_EQ(krylov_dimension_bound(1), 1);
  EXPECT_EQ(krylov_dimension_bound(256), 65281);
  EXPECT_THROW(krylov_dimension_bound(0), DomainError);
}

TEST(Lanczos, SingleSiteTfim) {
  const SuperOperator l = build_liouvillian(build_tfim_hamiltonian(1, 1.0, 0.0));
  const KrylovResult r = lanczos(l, seed_of(pauli(1, 1, PauliAxis::Z)));
  ASSERT_EQ(r.data.krylov_dim(), 2);
  EXPECT_NEAR(r.data.c[0], 2.0, 1e-14);
  EXPECT_NEAR(std::abs(r.data.b[0] - 2.0), 0.0, 1e-14);
  EXPECT_LT(std::abs(r.data.a[0]) + std::abs(r.data.a[1]), 1e-14);
  EXPECT_EQ(r.data.termination, Termination::Breakdown);
}

TEST(Lanczos, IdentitySeed) {
  const SuperOperator l = build_liouvillian(build_tfim_hamiltonian(3, -1.05, 0.5));
  const KrylovResult r = lanczos(l, seed_of(identity_operator(3)));
  EXPECT_EQ(r.data.krylov_dim(), 1);
  EXPECT_TRUE(r.data.b.empty());
}

TEST(Lanczos, RejectsOpenGenerator) {
  const SuperOperator lo = open_tfim(2, 1.0, 0.0, 0.1, 0.0);
  EXPECT_THROW(lanczos(lo, seed_of(pauli(2, 1, PauliAxis::Z))), DomainError);
}

TEST(Lanczos, DimensionBoundRespected) {
  const SuperOperator l = build_liouvillian(build_tfim_hamiltonian(3, -1.05, 0.5));
  const KrylovResult r = lanczos(l, seed_of(pauli(3, 2, PauliAxis::Z)));
  EXPECT_LE(r.data.krylov_dim(), krylov_dimension_bound(8));
  EXPECT_GT(r.data.krylov_dim(), 10);
}

TEST(BiLanczos, ReducesToLanczosWithoutJumps) {
  for (auto [g, h] : {std::pair{1.0, 0.0}, std::pair{-1.05, 0.5}}) {
    const SuperOperator l = build_lindbladian(build_tfim_hamiltonian(3, g, h), {});
    const SuperVector seed = seed_of(pauli(3, 2, PauliAxis::Z));
    const KrylovResult bi = bilanczos(l, seed);
    const KrylovResult la = lanczos(l, seed);
    ASSERT_EQ(bi.data.krylov_dim(), la.data.krylov_dim());
    double max_a = 0.0;
    double max_beta = 0.0;
    for (const Complex& a : bi.data.a) max_a = std::max(max_a, std::abs(a));
    for (double c : la.data.c) max_beta = std::max(max_beta, c);
    EXPECT_LT(max_a, 1e-8);
    for (std::size_t n = 0; n < la.data.c.size(); ++n) {
      EXPECT_LT(std::abs(bi.data.b[n] - la.data.c[n]), 1e-8 * max_beta) << n;
      EXPECT_NEAR(bi.data.c[n], la.data.c[n], 1e-8 * max_beta) << n;
    }
  }
}

// Closed integrable N=4, seed z2. Reference b_1..b_30 from a 50-digit Lanczos run on the
// spectral measure; the exact sequence terminates at K = 39. Double precision tracks it
// to ~1e-14 up to n = 30 and loses it within the last few steps, after which neither
// iteration notices the exhausted space.
TEST(Lanczos, ClosedIntegrablePrefixMatchesHighPrecision) {
  static constexpr double kExact[] = {
      2.0, 2.8284271247461901, 3.4641016151377546, 3.9157800414902435,
      4.2494671447715364, 4.508813803230958, 4.6901516361676369, 4.7617889790004812,
      4.7126947902054775, 4.5354721714551819, 4.3348872679236436, 4.0061179691033065,
      3.5279743420471346, 2.9478392578635569, 3.1684180770143438, 3.5597518706279072,
      3.6883795794729511, 2.7129126519733618, 3.1317623058008014, 3.099751251274391,
      3.0415495561100684, 3.3983635994639508, 3.161924036209404, 2.6546592351682355,
      2.0760201200258026, 2.8371211767653051, 2.9700999108697751, 2.5321665030891636,
      1.1790498353804359, 1.6813761022692825};
  const SpinOperator h = build_tfim_hamiltonian(4, 1.0, 0.0);
  const SuperVector seed = seed_of(pauli(4, 2, PauliAxis::Z));
  const KrylovResult la = lanczos(build_liouvillian(h), seed);
  const KrylovResult bi = bilanczos(build_lindbladian(h, {}), seed);
  ASSERT_GE(la.data.c.size(), std::size(kExact));
  ASSERT_GE(bi.data.c.size(), std::size(kExact));
  for (std::size_t n = 0; n < std::size(kExact); ++n) {
    EXPECT_NEAR(la.data.c[n], kExact[n], 1e-11) << n;
    EXPECT_NEAR(bi.data.c[n], kExact[n], 1e-11) << n;
  }
}

TEST(BiLanczos, DephasingEigenoperator) {
  const double gamma = 0.03;
  const std::vector<SpinOperator> jumps = {pauli(1, 1, PauliAxis::Z, std::sqrt(gamma))};
  const SuperOperator lo = build_lindbladian(pauli(1, 1, PauliAxis::Z, 0.0), jumps);
  const KrylovResult r = bilanczos(lo, seed_of(pauli(1, 1, PauliAxis::X)));
  ASSERT_EQ(r.data.krylov_dim(), 1);
  EXPECT_NEAR(std::abs(r.data.a[0] - Complex(0.0, 2.0 * gamma)), 0.0, 1e-15);
}

TEST(BiLanczos, SeedAnnihilated) {
  const SuperOperator lo = open_tfim(2, 1.0, 0.0, 0.0, 0.05);
  try {
    bilanczos(lo, seed_of(identity_operator(2)));
    FAIL() << "expected a breakdown";
  } catch (const BreakdownError& e) {
    EXPECT_EQ(e.step(), 0);
  }
}

TEST(BiLanczos, RejectsUnnormalizedSeed) {
  const SuperOperator lo = open_tfim(2, 1.0, 0.0, 0.1, 0.0);
  EXPECT_THROW(bilanczos(lo, vectorize(pauli(2, 1, PauliAxis::Z))), DomainError);
  EXPECT_THROW(bilanczos(lo, SuperVector::Ones(3).normalized()), DimensionError);
}

TEST(BiLanczos, TwoSiteChaoticDephasingRegression) {
  // Independent dense-vector bi-Lanczos (numpy, no parity projection).
  const double frozen_c[] = {2.1,
                             2.23606797749979,
                             2.593838853899756,
                             2.720089636433818,
                             3.31638408246303,
                             2.5531793133411202,
                             1.8748731029727481,
                             2.5283100709583963,
                             1.239073890333723,
                             1.9929207204554193,
                             0.25972566339042014,
                             1.8272483645907964,
                             0.5145636316477525,
                             0.02326411925499309};
  const double frozen_im_a[] = {0.0, 0.1, 0.1, 0.1524375743162901, 0.08978712899329061,
                                0.10424424383016745, 0.16385577802993737, 0.05738649977905397};
  const SuperOperator lo = open_tfim(2, -1.05, 0.5, 0.0, 0.05);
  const KrylovResult r = bilanczos(lo, seed_of(pauli(2, 1, PauliAxis::Z)));
  ASSERT_EQ(r.data.krylov_dim(), 15);
  for (int n = 0; n < 14; ++n) EXPECT_NEAR(r.data.c[n], frozen_c[n], 1e-9) << n;
  for (int n = 0; n < 8; ++n) EXPECT_NEAR(r.data.a[n].imag(), frozen_im_a[n], 1e-12) << n;
}

TEST(BiLanczos, PropertySuiteOnSmallOpenChains) {
  for (auto [g, h] : {std::pair{1.0, 0.0}, std::pair{-1.05, 0.5}}) {
    const SuperOperator lo = open_tfim(3, g, h, 0.05, 0.02);
    IterationOptions opt;
    opt.store_bases = true;
    const KrylovResult r = bilanczos(lo, seed_of(pauli(3, 2, PauliAxis::Z)), opt);
    const TridiagonalData& t = r.data;
    EXPECT_LE(t.krylov_dim(), lo.dimension());
    double max_a = 0.0;
    for (const Complex& a : t.a) max_a = std::max(max_a, std::abs(a));
    for (const Complex& a : t.a) EXPECT_LE(std::abs(a.real()), 1e-8 * max_a);
    for (std::size_t n = 0; n < t.c.size(); ++n) {
      EXPECT_GE(t.c[n], 0.0);
      EXPECT_LE(std::abs(std::abs(t.b[n]) - t.c[n]), 1e-8 * t.c[n]) << n;
    }
    EXPECT_LE(biorthonormality_residual(r.bases), 1e-8);
    EXPECT_LE(reconstruction_residual(lo, r.bases, t), 1e-8);
    EXPECT_TRUE(t.diagnostics.parity_projection);
  }
}

TEST(BiLanczos, ReconstructionWithoutParityProjection) {
  const SuperOperator lo = open_tfim(2, -1.05, 0.5, 0.1, 0.05);
  IterationOptions opt;
  opt.store_bases = true;
  opt.preserve_hermiticity = false;
  const KrylovResult r = bilanczos(lo, seed_of(pauli(2, 1, PauliAxis::Z)), opt);
  EXPECT_FALSE(r.data.diagnostics.parity_projection);
  EXPECT_LE(biorthonormality_residual(r.bases), 1e-8);
  EXPECT_LE(reconstruction_residual(lo, r.bases, r.data), 1e-8);
}

TEST(BiLanczos, TraceProjectionOnUnitalChains) {
  const SuperOperator lo = open_tfim(3, -1.05, 0.5, 0.05, 0.02);
  const SuperVector seed = seed_of(pauli(3, 2, PauliAxis::Z));
  const KrylovResult r = bilanczos(lo, seed);
  EXPECT_TRUE(r.data.diagnostics.trace_projection);
  EXPECT_LE(r.data.krylov_dim(), lo.dimension() - 1);
  // no spurious identity mode at zero
  const StabilityReport rep = tridiagonal_spectrum_check(r.data);
  EXPECT_LT(rep.max_real_part, -1e-3);

  IterationOptions off;
  off.preserve_trace = false;
  EXPECT_FALSE(bilanczos(lo, seed, off).data.diagnostics.trace_projection);
}

TEST(BiLanczos, TraceProjectionNeedsUnitalGenerator) {
  const SpinOperator h = build_tfim_hamiltonian(2, 1.0, 0.0);
  const std::vector<SpinOperator> jumps = {pauli(2, 1, PauliAxis::Minus, std::sqrt(0.1))};
  const SuperOperator damped = build_lindbladian(h, jumps);
  const SuperVector z = seed_of(pauli(2, 1, PauliAxis::Z));
  EXPECT_FALSE(bilanczos(damped, z).data.diagnostics.trace_projection);

  // seed with an identity part
  const SuperOperator lo = open_tfim(2, 1.0, 0.0, 0.1, 0.05);
  SuperVector v = vectorize(pauli(2, 1, PauliAxis::Z));
  for (Index j = 0; j < 4; ++j) v[j + 4 * j] += 1.0;
  EXPECT_FALSE(bilanczos(lo, v / v.norm()).data.diagnostics.trace_projection);
}

TEST(BiLanczos, Deterministic) {
  const SuperOperator lo = open_tfim(3, -1.05, 0.5, 0.01, 0.01);
  const SuperVector seed = seed_of(pauli(3, 2, PauliAxis::Z));
  const KrylovResult a = bilanczos(lo, seed);
  const KrylovResult b = bilanczos(lo, seed);
  ASSERT_EQ(a.data.krylov_dim(), b.data.krylov_dim());
  EXPECT_EQ(a.data.a, b.data.a);
  EXPECT_EQ(a.data.b, b.data.b);
  EXPECT_EQ(a.data.c, b.data.c);
}

TEST(BiLanczos, MaxStepsAndMemoryCap) {
  const SuperOperator lo = open_tfim(3, -1.05, 0.5, 0.01, 0.01);
  const SuperVector seed = seed_of(pauli(3, 2, PauliAxis::Z));
  IterationOptions opt;
  opt.max_steps = 5;
  const KrylovResult r = bilanczos(lo, seed, opt);
  EXPECT_EQ(r.data.krylov_dim(), 5);
  EXPECT_EQ(r.data.termination, Termination::MaxSteps);
  opt.max_steps = 0;
  opt.memory_cap_bytes = 1024;
  EXPECT_THROW(bilanczos(lo, seed, opt), ResourceError);
}

TEST(Arnoldi, HermitianGeneratorGivesLanczos) {
  const SuperOperator l = build_liouvillian(build_tfim_hamiltonian(2, -1.05, 0.5));
  const SuperVector seed = seed_of(pauli(2, 1, PauliAxis::Z));
  const HessenbergData h = arnoldi(l, seed);
  const KrylovResult la = lanczos(l, seed);
  ASSERT_EQ(h.krylov_dim(), la.data.krylov_dim());
  for (Index j = 0; j < h.krylov_dim(); ++j) {
    for (Index i = 0; i + 1 < j; ++i) EXPECT_LT(std::abs(h.h(i, j)), 1e-10);
  }
  const auto sub = h.subdiagonal_magnitudes();
  for (std::size_t n = 0; n < sub.size(); ++n) EXPECT_NEAR(sub[n], la.data.c[n], 1e-10);
}

TEST(Arnoldi, MatchesBiLanczosOnIntegrableDephasing) {
  // both give c = (2, 2, 2); frozen from a dense numpy cross-check
  const SuperOperator lo = open_tfim(2, 1.0, 0.0, 0.0, 0.05);
  const SuperVector seed = seed_of(pauli(2, 1, PauliAxis::Z));
  const HessenbergData h = arnoldi(lo, seed);
  const KrylovResult bi = bilanczos(lo, seed);
  const auto sub = h.subdiagonal_magnitudes();
  ASSERT_EQ(sub.size(), bi.data.c.size());
  ASSERT_EQ(sub.size(), 3U);
  for (std::size_t n = 0; n < sub.size(); ++n) {
    EXPECT_NEAR(sub[n], 2.0, 1e-12);
    EXPECT_NEAR(sub[n], bi.data.c[n], 1e-6);
  }
}

TEST(Arnoldi, EigenoperatorSeed) {
  const std::vector<SpinOperator> jumps = {pauli(1, 1, PauliAxis::Z, 0.2)};
  const SuperOperator lo = build_lindbladian(pauli(1, 1, PauliAxis::Z, 0.0), jumps);
  EXPECT_EQ(arnoldi(lo, seed_of(pauli(1, 1, PauliAxis::X))).krylov_dim(), 1);
}

TEST(Effective, ClosedAndDephasing) {
  const SuperOperator l = build_liouvillian(build_tfim_hamiltonian(2, 1.0, 0.0));
  const KrylovResult closed = bilanczos(l, seed_of(pauli(2, 1, PauliAxis::Z)));
  const EffectiveTridiagonal eff = effective_tridiagonal(closed.data);
  for (double a : eff.abs_a) EXPECT_LT(std::abs(a), 1e-8);
  const KrylovResult la = lanczos(l, seed_of(pauli(2, 1, PauliAxis::Z)));
  ASSERT_EQ(eff.abs_b.size(), la.data.c.size());
  for (std::size_t n = 0; n < eff.abs_b.size(); ++n) EXPECT_NEAR(eff.abs_b[n], la.data.c[n], 1e-12);

  const double gamma = 0.04;
  const std::vector<SpinOperator> jumps = {pauli(1, 1, PauliAxis::Z, std::sqrt(gamma))};
  const KrylovResult deph = bilanczos(build_lindbladian(pauli(1, 1, PauliAxis::Z, 0.0), jumps),
                                      seed_of(pauli(1, 1, PauliAxis::X)));
  const EffectiveTridiagonal e2 = effective_tridiagonal(deph.data);
  ASSERT_EQ(e2.abs_a.size(), 1U);
  EXPECT_NEAR(e2.abs_a[0], 2.0 * gamma, 1e-15);
  EXPECT_TRUE(e2.abs_b.empty());
}

TEST(Effective, RejectsBrokenProperties) {
  TridiagonalData t;
  t.a = {Complex(0.0, 0.1), Complex(0.0, 0.2)};
  t.b = {Complex(1.0, 0.0)};
  t.c = {1.5};
  EXPECT_THROW(effective_tridiagonal(t), DomainError);
  t.c = {1.0};
  t.a[1] = Complex(0.1, 0.2);
  EXPECT_THROW(effective_tridiagonal(t), DomainError);
  t.a[1] = Complex(0.0, -0.2);
  t.b = {Complex(-1.0, 0.0)};
  const EffectiveTridiagonal eff = effective_tridiagonal(t);
  EXPECT_EQ(eff.negative_diagonals, 1);
  EXPECT_EQ(eff.abs_a[1], -0.2);
  EXPECT_EQ(eff.abs_b[0], 1.0);
  EXPECT_EQ(eff.signed_b[0], -1.0);
}

TEST(StateBiLanczos, TwoByTwoByHand) {
  SparseMatrix h(2, 2);
  h.insert(0, 1) = 1.0;
  h.insert(1, 0) = 0.5;
  Vector seed(2);
  seed << 1.0, 0.0;
  const KrylovResult r = bilanczos_state(h, seed);
  // a_0 = 0, Q_1 = (0, 0.5) -> c = 0.5, P_1 = (0, 1) -> b = <P|Q>/|Q| = 1, then Q_2 = 0
  ASSERT_EQ(r.data.krylov_dim(), 2);
  EXPECT_EQ(r.data.a[0], Complex(0.0));
  EXPECT_EQ(r.data.a[1], Complex(0.0));
  EXPECT_NEAR(r.data.c[0], 0.5, 1e-15);
  EXPECT_NEAR(std::abs(r.data.b[0] - 1.0), 0.0, 1e-15);
  EXPECT_LT((r.data.dense() - DenseMatrix(h)).norm(), 1e-15);
}

TEST(StateBiLanczos, HermitianMatchesSpectrum) {
  const SpinOperator h = build_tfim_hamiltonian(3, -1.05, 0.5);
  Vector seed = Vector::Ones(8).normalized();
  const KrylovResult r = bilanczos_state(h, seed);
  for (const Complex& a : r.data.a) EXPECT_LT(std::abs(a.imag()), 1e-12);
  for (std::size_t n = 0; n < r.data.c.size(); ++n) {
    EXPECT_NEAR(std::abs(r.data.b[n] - r.data.c[n]), 0.0, 1e-10);
  }
  // the Krylov space of a generic seed is a union of eigenspaces: T's spectrum is a subset of H's
  Eigen::SelfAdjointEigenSolver<DenseMatrix> full{DenseMatrix(h.matrix)};
  Eigen::ComplexEigenSolver<DenseMatrix> small{r.data.dense()};
  for (Index i = 0; i < small.eigenvalues().size(); ++i) {
    double best = 1e300;
    for (Index j = 0; j < 8; ++j) {
      best = std::min(best, std::abs(small.eigenvalues()(i) - full.eigenvalues()(j)));
    }
    EXPECT_LT(best, 1e-9);
  }
}

TEST(StateBiLanczos, EigenvectorSeed) {
  SparseMatrix h(3, 3);
  h.insert(0, 0) = 0.7;
  h.insert(1, 1) = -0.2;
  h.insert(2, 2) = 1.3;
  Vector seed = Vector::Zero(3);
  seed(2) = 1.0;
  const KrylovResult r = bilanczos_state(h, seed);
  ASSERT_EQ(r.data.krylov_dim(), 1);
  EXPECT_EQ(r.data.a[0], Complex(1.3));
}

TEST(TridiagonalSpectrum, OpenChainIsStable) {
  const SuperOperator lo = open_tfim(2, -1.05, 0.5, 0.1, 0.05);
  const KrylovResult r = bilanczos(lo, seed_of(pauli(2, 1, PauliAxis::Z)));
  const StabilityReport tri = tridiagonal_spectrum_check(r.data);
  const StabilityReport full = generator_spectrum_check(lo);
  EXPECT_TRUE(tri.stable);
  EXPECT_TRUE(tri.conjugate_pairs);
  EXPECT_LE(tri.max_real_part, full.max_real_part + 1e-8);
  // the Krylov space is invariant, so its eigenvalues are eigenvalues of i L_o
  for (Complex ev : tri.eigenvalues) {
    double best = 1e300;
    for (Complex f : full.eigenvalues) best = std::min(best, std::abs(ev - f));
    EXPECT_LT(best, 1e-6) << ev;
  }
}

TEST(TridiagonalSpectrum, ClosedChainIsNeutral) {
  const SuperOperator l = build_liouvillian(build_tfim_hamiltonian(3, 1.0, 0.0));
  const KrylovResult r = bilanczos(l, seed_of(pauli(3, 2, PauliAxis::Z)));
  const StabilityReport rep = tridiagonal_spectrum_check(r.data);
  EXPECT_LT(std::abs(rep.max_real_part), 1e-10);
  EXPECT_TRUE(rep.stable);
}

}  // namespace
}  // namespace opkrylov
