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

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "sepcert/linalg.hpp"

namespace sepcert {

struct ProductTerm {
  double weight = 0.0;
  CMatrix rho_a;
  CMatrix rho_b;
};

/// Weighted list {p_i, rho_A^(i), rho_B^(i)} witnessing separability of
/// sum_i p_i rho_A^(i) (x) rho_B^(i).
struct ProductEnsemble {
  Dims dims;
  std::vector<ProductTerm> terms;

  std::size_t size() const { return terms.size(); }
};

/// Weight/factor tolerances used by ensemble validation.
struct EnsembleTolerances {
  double weight_sum = 1e-10;
  double psd = kPsdTol;
  double trace = kTraceTol;
};

/// Itemized invariant violations; empty when the ensemble is valid.
std::vector<std::string> ensemble_violations(const ProductEnsemble& e,
                                             const EnsembleTolerances& tol = {});

/// Throws InvariantViolation listing the first violation.
void validate_ensemble(const ProductEnsemble& e, const EnsembleTolerances& tol = {});

BipartiteState assemble(const ProductEnsemble& e);

/// Vector of d fourth roots of unity; exponents[j] in {0,1,2,3} encodes i^k.
class PhaseVector {
 public:
  explicit PhaseVector(std::vector<int> exponents);

  Index size() const { return static_cast<Index>(exponents_.size()); }
  Complex operator[](Index j) const;
  /// |Phi_z> = (1/sqrt d) sum_j z_j |j>.
  CVector state() const;
  PhaseVector conjugate() const;

  /// All 4^d vectors in lexicographic order of exponents.
  static std::vector<PhaseVector> enumerate(Index d);

 private:
  std::vector<int> exponents_;
};

/// |psi+><psi+| with |psi+> = (1/sqrt d) sum_i |ii>.
BipartiteState maximally_entangled(Index d);

/// (1 - lambda) I/d^2 + lambda |psi+><psi+|, 0 <= lambda <= 1.
BipartiteState isotropic_state(Index d, double lambda);

inline constexpr Index kMaxPhaseEnumerationDim = 6;

/// 4^d phase-vector terms of weight d/((d+1) 4^d) plus d computational-basis
/// terms of weight 1/((d+1) d). Assembles to isotropic_state(d, 1/(d+1)).
ProductEnsemble isotropic_base_ensemble(Index d);

/// Normalized A A^H with A complex Gaussian; full rank almost surely.
CMatrix random_density_matrix(Index d, std::mt19937_64& rng);
CMatrix random_density_matrix(Index d, Index rank, std::mt19937_64& rng);
CVector random_pure_state(Index d, std::mt19937_64& rng);

/// n_terms product terms with flat-simplex weights and full-rank local states.
/// Deterministic in seed.
ProductEnsemble random_separable(Index da, Index db, Index n_terms, std::uint64_t seed);

/// rho_check = (E rho0)^{T_B} E. Requires d_A == d_B.
CMatrix check_operator(const BipartiteState& rho0);

struct FaithfulnessReport {
  bool faithful = false;
  double sigma_min = 0.0;
};

inline constexpr double kFaithfulTol = 1e-8;

/// Faithful iff Lambda -> (I (x) Lambda)(rho0) is one-to-one.
///
/// d_A == d_B: smallest singular value of check_operator(rho0).
/// d_A != d_B: rho0 is read as the Choi matrix of Lambda0: B(H_A) -> B(H_B);
/// the test is the d_B^2-th singular value of Lambda0's transfer matrix
/// (zero when d_A < d_B, since Lambda0 cannot be onto).
FaithfulnessReport is_faithful(const BipartiteState& rho0, double tol_sigma = kFaithfulTol);

/// Merges terms whose factors agree within merge_tol, drops weights <= 0 and,
/// when the term count exceeds dA^2 dB^2 + 1, removes terms by Caratheodory
/// reduction (affine dependencies among the product matrices).
ProductEnsemble canonicalize(const ProductEnsemble& e, double merge_tol = 1e-12);

}  // namespace sepcert
