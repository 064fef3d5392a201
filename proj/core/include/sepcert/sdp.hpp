// Copyright 2026 The sepcert Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <limits>
#include <span>
#include <string>
#include <vector>

#include "sepcert/linalg.hpp"

namespace sepcert {

/// Affine Hermitian family A0 + sum_J x_J A_J of size x size matrices.
///
/// Coefficient matrices are stored as columns of a (size^2) x n_vars matrix,
/// column J holding A_J in Eigen's column-major order.
struct LmiBlock {
  Index size = 0;
  CMatrix constant;
  CMatrix coefficients;

  static LmiBlock from_matrices(const CMatrix& constant, std::span<const CMatrix> coefficients);

  CMatrix coefficient(Index j) const;
  CMatrix evaluate(const RVector& x) const;
};

/// Find x with C x = b and every block A0 + sum_J x_J A_J >= 0.
struct LmiProblem {
  Index n_vars = 0;
  RMatrix equality_matrix;  // rows x n_vars, possibly zero rows
  RVector equality_rhs;
  std::vector<LmiBlock> blocks;

  /// Throws DimensionMismatch / InvariantViolation on malformed input.
  void validate() const;
};

struct EqualityReduction {
  bool consistent = true;
  double residual = 0.0;  // ||C x0 - b||
  RVector particular;     // minimum-norm least-squares solution x0
  RMatrix nullspace;      // orthonormal columns N; x = x0 + N y
  LmiProblem reduced;     // blocks in y, no equality rows
};

inline constexpr double kEqualityTol = 1e-8;
inline constexpr double kFeasibilityTol = 1e-7;

/// Least-squares particular solution plus orthonormal nullspace basis.
/// Inconsistent when ||C x0 - b|| > eps_eq * ||b||.
EqualityReduction eliminate_equalities(const LmiProblem& p, double eps_eq = kEqualityTol);

struct SolverOptions {
  double eps_feas = kFeasibilityTol;  // relative to the constant-block scale
  double eps_eq = kEqualityTol;       // relative to ||b||
  int max_iter = 500;                 // Newton steps
  double gap_tol = 1e-9;              // relative optimality gap
  /// Stop as soon as the relative margin reaches this value.
  double target_margin = std::numeric_limits<double>::infinity();
  /// Stop with NotFound once the duality bound shows the margin stays below eps_feas.
  bool early_not_found = true;
};

enum class FeasStatus { Feasible, NotFound, Inconsistent };

std::string to_string(FeasStatus s);

struct FeasResult {
  FeasStatus status = FeasStatus::NotFound;
  RVector x;                      // best point found (empty when Inconsistent)
  double margin = -std::numeric_limits<double>::infinity();  // min over blocks of min eig at x
  double equality_residual = 0.0;
  double scale = 1.0;             // largest constant-block norm after elimination
  int iterations = 0;
  /// Best margin seen after each Newton step; never decreases.
  std::vector<double> margin_history;
};

/// Maximizes t subject to every block >= t I (equalities eliminated first) with
/// a log-det barrier path-following method. Feasible iff the re-evaluated
/// margin satisfies margin / scale >= eps_feas and the equality residual is
/// within eps_eq. NotFound is inconclusive.
FeasResult solve_feasibility(const LmiProblem& p, const SolverOptions& opts = {});

/// min over blocks of the smallest eigenvalue of A0 + sum_J x_J A_J.
double evaluate_margin(const LmiProblem& p, const RVector& x);

double equality_residual(const LmiProblem& p, const RVector& x);

}  // namespace sepcert
