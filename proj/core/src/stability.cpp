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

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <vector>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "opkrylov/krylov.hpp"
#include "opkrylov/liouville.hpp"

namespace opkrylov {

namespace {

bool closed_under_conjugation(const std::vector<Complex>& eig) {
  double scale = 1.0;
  for (const Complex& z : eig) scale = std::max(scale, std::abs(z));
  const double tol = 1e-8 * scale;
  std::vector<bool> used(eig.size(), false);
  for (std::size_t i = 0; i < eig.size(); ++i) {
    if (used[i]) continue;
    if (std::abs(eig[i].imag()) <= tol) {
      used[i] = true;
      continue;
    }
    bool found = false;
    for (std::size_t j = i + 1; j < eig.size(); ++j) {
      if (!used[j] && std::abs(eig[j] - std::conj(eig[i])) <= tol) {
        used[i] = used[j] = true;
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

std::vector<Complex> hessenberg_eigenvalues_real(Eigen::MatrixXd h) {
  const auto n = static_cast<lapack_int>(h.rows());
  std::vector<double> wr(n), wi(n);
  const lapack_int info = LAPACKE_dhseqr(LAPACK_COL_MAJOR, 'E', 'N', n, 1, n, h.data(), n,
                                         wr.data(), wi.data(), nullptr, 1);
  if (info != 0) throw Error("dhseqr failed with info " + std::to_string(info));
  std::vector<Complex> out(n);
  for (lapack_int i = 0; i < n; ++i) out[i] = Complex(wr[i], wi[i]);
  return out;
}

std::vector<Complex> hessenberg_eigenvalues_complex(DenseMatrix h) {
  const auto n = static_cast<lapack_int>(h.rows());
  std::vector<Complex> w(n);
  const lapack_int info = LAPACKE_zhseqr(LAPACK_COL_MAJOR, 'E', 'N', n, 1, n, h.data(), n,
                                         w.data(), nullptr, 1);
  if (info != 0) throw Error("zhseqr failed with info " + std::to_string(info));
  return w;
}

}  // namespace

StabilityReport stability_from_eigenvalues(std::vector<Complex> eigenvalues, double threshold) {
  StabilityReport report;
  report.threshold = threshold;
  report.max_real_part = -std::numeric_limits<double>::infinity();
  for (const Complex& z : eigenvalues) {
    report.max_real_part = std::max(report.max_real_part, z.real());
  }
  if (eigenvalues.empty()) report.max_real_part = 0.0;
  report.stable = report.max_real_part <= threshold;
  report.conjugate_pairs = closed_under_conjugation(eigenvalues);
  report.eigenvalues = std::move(eigenvalues);
  return report;
}

StabilityReport generator_spectrum_check(const SuperOperator& s, double threshold) {
  const Index n = s.dimension();
  if (n > kDenseSpectrumGuard) {
    throw ResourceError("dense spectrum check limited to dimension " +
                        std::to_string(kDenseSpectrumGuard) + ", got " + std::to_string(n) +
                        "; use tridiagonal_spectrum_check");
  }
  DenseMatrix a = kI * DenseMatrix(s.matrix());
  const auto dim = static_cast<lapack_int>(n);
  std::vector<Complex> w(n);
  const lapack_int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'N', dim, a.data(), dim, w.data(),
                                        nullptr, 1, nullptr, 1);
  if (info != 0) throw Error("zgeev failed with info " + std::to_string(info));
  return stability_from_eigenvalues(std::move(w), threshold);
}

StabilityReport tridiagonal_spectrum_check(const TridiagonalData& t, double threshold) {
  const Index k = t.krylov_dim();
  double scale = 0.0;
  double off_structure = 0.0;
  for (const Complex& a : t.a) {
    scale = std::max(scale, std::abs(a));
    off_structure = std::max(off_structure, std::abs(a.real()));
  }
  for (std::size_t n = 0; n < t.b.size(); ++n) {
    scale = std::max(scale, t.c[n]);
    off_structure = std::max(off_structure, std::abs(t.b[n].imag()));
  }
  // With a purely imaginary and b real, diag(i^n) maps i*T onto the real matrix
  // S(n,n) = -Im a_n, S(n-1,n) = -b_n, S(n,n-1) = c_n.
  if (off_structure <= 1e-12 * std::max(1.0, scale)) {
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(k, k);
    for (Index n = 0; n < k; ++n) s(n, n) = -t.a[n].imag();
    for (Index n = 1; n < k; ++n) {
      s(n - 1, n) = -t.b[n - 1].real();
      s(n, n - 1) = t.c[n - 1];
    }
    return stability_from_eigenvalues(hessenberg_eigenvalues_real(std::move(s)), threshold);
  }
  return stability_from_eigenvalues(hessenberg_eigenvalues_complex(kI * t.dense()), threshold);
}

}  // namespace opkrylov
