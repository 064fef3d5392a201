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

#include <complex>
#include <string>

#include <Eigen/Dense>

#include "sepcert/errors.hpp"

namespace sepcert {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kPsdTol = 1e-10;
inline constexpr double kTraceTol = 1e-10;

/// Local dimensions of H_A (a) and H_B (b). The composite index of |m>|r> is m*b + r.
struct Dims {
  Index a = 0;
  Index b = 0;

  Index total() const { return a * b; }
  friend bool operator==(const Dims&, const Dims&) = default;
};

enum class Subsystem { A, B };

enum class Normalization { UnitTrace, Unnormalized };

/// Hermitian PSD matrix on H_A (x) H_B with explicit local dimensions.
///
/// Unit trace is enforced unless the state is built as Unnormalized, which is
/// how cone elements produced by local maps are carried before rescaling.
/// The stored matrix is exactly Hermitian: (M + M^H)/2 is taken after the
/// tolerance check.
class BipartiteState {
 public:
  static BipartiteState from_matrix(const CMatrix& m, Dims dims,
                                    Normalization norm = Normalization::UnitTrace);

  Dims dims() const { return dims_; }
  const CMatrix& matrix() const { return mat_; }
  bool normalized() const { return norm_ == Normalization::UnitTrace; }

  /// Component R_mnrs, the coefficient of |m><n| (x) |r><s|.
  Complex component(Index m, Index n, Index r, Index s) const {
    return mat_(m * dims_.b + r, n * dims_.b + s);
  }

 private:
  BipartiteState(CMatrix m, Dims dims, Normalization norm)
      : mat_(std::move(m)), dims_(dims), norm_(norm) {}

  CMatrix mat_;
  Dims dims_;
  Normalization norm_;
};

/// Kronecker product, row (m,r) = m*rows(b) + r.
CMatrix tensor_product(const CMatrix& a, const CMatrix& b);

/// Traces out `traced`; the result lives on the other factor.
CMatrix partial_trace(const CMatrix& m, Dims dims, Subsystem traced);
CMatrix partial_trace(const BipartiteState& s, Subsystem traced);

CMatrix partial_transpose(const CMatrix& m, Dims dims, Subsystem which);
CMatrix partial_transpose(const BipartiteState& s, Subsystem which);

/// E = sum_ij |ij><ji| on C^d (x) C^d.
CMatrix swap_operator(Index d);

/// max_ij |M_ij - conj(M_ji)|.
double hermiticity_defect(const CMatrix& m);

/// True when the defect is within tol relative to max(1, max |M_ij|).
bool is_hermitian(const CMatrix& m, double tol = kHermitianTol);

CMatrix hermitian_part(const CMatrix& m);

struct Spectrum {
  RVector values;   // ascending
  CMatrix vectors;  // columns
};

/// Eigendecomposition of the Hermitian part. Throws InvariantViolation when the
/// input is not Hermitian within kHermitianTol (relative, see is_hermitian).
Spectrum eigh(const CMatrix& m);
RVector eigenvalues(const CMatrix& m);
double min_eigenvalue(const CMatrix& m);

/// V diag(f(lambda)) V^H for a PSD matrix with lambda clamped below at `floor`.
/// Used for square roots and inverse square roots of reduced states.
CMatrix psd_power(const CMatrix& m, double exponent, double floor = 0.0);

double smallest_singular_value(const CMatrix& m);

double frobenius_norm(const CMatrix& m);

/// Real coordinates of a Hermitian D x D matrix in the Frobenius-orthonormal
/// basis {E_aa; (E_ab + E_ba)/sqrt2; i(E_ba - E_ab)/sqrt2 for a < b}.
/// Ordering: the D diagonal entries, then for each a < b (row-major) the
/// symmetric then antisymmetric coordinate. Length D^2.
RVector hermitian_coordinates(const CMatrix& h);
CMatrix hermitian_from_coordinates(const RVector& x, Index dim);
CMatrix hermitian_basis_element(Index dim, Index k);

/// "sha256:<hex>" over the dimensions and the raw IEEE-754 entries (re, im,
/// row-major). Bit-exact: any change to any entry changes the digest.
std::string content_digest(const CMatrix& m, Dims dims);

}  // namespace sepcert
