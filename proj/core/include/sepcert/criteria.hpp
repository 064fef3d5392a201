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

#include <string>

#include "sepcert/linalg.hpp"

namespace sepcert {

enum class CriterionVerdict { Separable, Entangled, Inconclusive };

std::string to_string(CriterionVerdict v);

/// Uniform report. Direction per criterion:
///   eigenvalue:               Separable iff statistic >= threshold
///   gurvits-barnum:           Separable iff statistic <= threshold
///   ppt:                      Entangled iff statistic < threshold (= -tol)
struct CriterionReport {
  std::string name;
  CriterionVerdict verdict = CriterionVerdict::Inconclusive;
  double statistic = 0.0;
  double threshold = 0.0;
  std::string note;
};

inline constexpr double kMarginalFloor = 1e-10;
/// Absolute slack on threshold comparisons so exact-boundary states land on
/// the Separable side.
inline constexpr double kCriterionSlack = 1e-12;

/// (1/d) (1 (x) sigma_B^{-1/2}) sigma (1 (x) sigma_B^{-1/2}); Tr_A of the
/// result is I/d. Throws SingularMarginal when sigma_B has an eigenvalue
/// <= kMarginalFloor.
CMatrix tilde_sigma(const BipartiteState& sigma);

/// min eig(tilde_sigma) >= 1/(d(d+1)) certifies separability. Never Entangled.
CriterionReport corollary1_check(const BipartiteState& sigma);

/// ||sigma - I/d^2||_F^2 <= 1/(d^2 (d^2 - 1)) certifies separability.
CriterionReport gurvits_barnum_check(const BipartiteState& sigma);

double gb_radius_squared(Index d);

/// diag(eps + 1/(d(d+1)), lambda, ..., lambda) with lambda = 1/(d(d+1)) + delta,
/// delta = (1 - eps - d/(d+1))/(d^2 - 1), written in the generalized Bell basis
/// with the first eigenvector |psi+>. Both marginals are maximally mixed, so
/// tilde_sigma(sigma(eps)) == sigma(eps). Requires 0 <= eps <= 1 - d/(d+1).
BipartiteState sigma_epsilon(Index d, double eps);

/// ||sigma(eps) - I/d^2||_F^2 - 1/(d^2 (d^2 - 1)).
double gb_gap(Index d, double eps);

/// Statistic = min eig(sigma^{T_B}); Entangled below -kPsdTol. When
/// dA*dB <= 6 a non-negative statistic is upgraded to Separable.
CriterionReport ppt_check(const BipartiteState& sigma);

}  // namespace sepcert
