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

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace opkrylov {

using Complex = std::complex<double>;
using Index = Eigen::Index;

/// Row-major so that y = A x streams each row once.
using SparseMatrix = Eigen::SparseMatrix<Complex, Eigen::RowMajor>;
using Vector = Eigen::VectorXcd;
using DenseMatrix = Eigen::MatrixXcd;

/// Operator-space vectors (vectorized operators). Plain complex dot product.
using SuperVector = Vector;

inline constexpr Complex kI{0.0, 1.0};

/// Entries below this magnitude are dropped when sparse operators are assembled.
inline constexpr double kDropTolerance = 1e-14;

/// Largest chain length any builder accepts (2^14 x 2^14 operators).
inline constexpr int kMaxSites = 14;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Mismatched operand dimensions.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A request that would exceed a memory or size guard. Raised before allocating.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// Operator fails to commute with a symmetry it is required to respect.
class SymmetryError : public Error {
 public:
  SymmetryError(const std::string& symmetry, double violation)
      : Error("operator violates " + symmetry + " symmetry (commutator max " +
              std::to_string(violation) + ")"),
        symmetry_(symmetry),
        violation_(violation) {}

  const std::string& symmetry() const noexcept { return symmetry_; }
  double violation() const noexcept { return violation_; }

 private:
  std::string symmetry_;
  double violation_;
};

/// Krylov iteration could not start or continue.
class BreakdownError : public Error {
 public:
  BreakdownError(const std::string& what, Index step) : Error(what), step_(step) {}
  Index step() const noexcept { return step_; }

 private:
  Index step_;
};

/// Bi-orthonormality lost beyond the accepted residual.
class ReorthogonalizationError : public Error {
 public:
  ReorthogonalizationError(Index step, double residual)
      : Error("bi-orthonormality residual " + std::to_string(residual) + " at step " +
              std::to_string(step)),
        step_(step),
        residual_(residual) {}

  Index step() const noexcept { return step_; }
  double residual() const noexcept { return residual_; }

 private:
  Index step_;
  double residual_;
};

/// ODE integrator could not meet its tolerance.
class IntegrationError : public Error {
 public:
  IntegrationError(const std::string& what, double time) : Error(what), time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

}  // namespace opkrylov
