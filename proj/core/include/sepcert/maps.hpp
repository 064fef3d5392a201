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

#include <span>

#include "sepcert/linalg.hpp"

namespace sepcert {

/// Linear map from operators on C^d_in to operators on C^d_out.
///
/// The transfer matrix T is (d_out^2) x (d_in^2) and acts on row-major
/// vectorized operators: Lambda(|r><s|) = sum_kl T(k*d_out + l, r*d_in + s) |k><l|.
/// T(k*d_out + l, r*d_in + s) is the coefficient x[k,l,r,s].
class LocalMap {
 public:
  LocalMap(Index d_in, Index d_out, CMatrix transfer);

  static LocalMap identity(Index d);
  static LocalMap zero(Index d_in, Index d_out);
  static LocalMap transpose(Index d);
  /// rho -> Tr(rho) * replacement.
  static LocalMap trace_and_replace(const CMatrix& replacement, Index d_in);
  /// rho -> sum_k K_k rho K_k^H. All K_k must share a shape (d_out x d_in).
  static LocalMap from_kraus(std::span<const CMatrix> kraus);
  /// rho -> left * rho * right.
  static LocalMap sandwich(const CMatrix& left, const CMatrix& right);

  Index d_in() const { return d_in_; }
  Index d_out() const { return d_out_; }
  const CMatrix& transfer() const { return transfer_; }

  Complex coefficient(Index k, Index l, Index r, Index s) const {
    return transfer_(k * d_out_ + l, r * d_in_ + s);
  }

  /// x[l,k,s,r] == conj(x[k,l,r,s]) within tol (relative to the largest entry).
  bool is_hermiticity_preserving(double tol = kHermitianTol) const;

  LocalMap operator+(const LocalMap& other) const;
  LocalMap operator*(double alpha) const;

 private:
  Index d_in_;
  Index d_out_;
  CMatrix transfer_;
};

/// Z = (1/d_in) sum_rs |r><s| (x) Lambda(|r><s|) = (I (x) Lambda)(|psi+><psi+|).
struct ChoiMatrix {
  Index d_in = 0;
  Index d_out = 0;
  CMatrix z;
};

CMatrix apply(const LocalMap& map, const CMatrix& rho);

/// (I (x) Lambda)(s): block (m, n) of the result is Lambda(block_mn(s)).
/// Output dims are (dims.a, map.d_out()); the result may be non-PSD.
CMatrix apply_local_B(const LocalMap& map, const CMatrix& s, Dims dims);
CMatrix apply_local_B(const LocalMap& map, const BipartiteState& s);

/// (Lambda (x) I)(s). Output dims are (map.d_out(), dims.b).
CMatrix apply_local_A(const LocalMap& map, const CMatrix& s, Dims dims);
CMatrix apply_local_A(const LocalMap& map, const BipartiteState& s);

/// [I (x) map_b + map_a (x) I](s). Requires map_a, map_b to be endomorphisms of
/// the respective factors so both terms share output dimensions.
CMatrix apply_local_sum(const LocalMap& map_a, const LocalMap& map_b, const BipartiteState& s);

ChoiMatrix choi_of_map(const LocalMap& map);

/// Exact inverse of choi_of_map: Lambda(rho) = d_in * sum_ijkl <ij|Z|kl> rho_ik |j><l|.
LocalMap map_of_choi(const ChoiMatrix& choi);

/// outer o inner; requires inner.d_out() == outer.d_in().
LocalMap compose(const LocalMap& outer, const LocalMap& inner);

}  // namespace sepcert
