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

#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "sepcert/linalg.hpp"

namespace sepcert {
namespace {

CMatrix diag2(double a, double b) {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

TEST(TensorProduct, IdentityTimesIdentity) {
  EXPECT_LT(oracle::max_abs(tensor_product(CMatrix::Identity(2, 2), CMatrix::Identity(2, 2)) -
                            CMatrix::Identity(4, 4)),
            1e-15);
}

TEST(TensorProduct, BasisProjectors) {
  const CMatrix p = tensor_product(diag2(1, 0), diag2(0, 1));
  CMatrix want = CMatrix::Zero(4, 4);
  want(1, 1) = 1.0;
  EXPECT_EQ(p, want);
}

TEST(TensorProduct, MatchesLoopOracleAndTraceFactorizes) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const CMatrix a = oracle::random_matrix(1 + trial % 3, 2 + trial % 2, rng);
    const CMatrix b = oracle::random_matrix(2 + trial % 4, 1 + trial % 3, rng);
    EXPECT_LT(oracle::max_abs(tensor_product(a, b) - oracle::kron(a, b)), 1e-14);
  }
  const CMatrix a = oracle::random_matrix(3, 3, rng), b = oracle::random_matrix(2, 2, rng);
  EXPECT_LT(std::abs(tensor_product(a, b).trace() - a.trace() * b.trace()), 1e-12);
}

TEST(TensorProduct, Associative) {
  std::mt19937_64 rng(5);
  const CMatrix a = oracle::random_matrix(2, 2, rng), b = oracle::random_matrix(3, 3, rng),
                c = oracle::random_matrix(2, 2, rng);
  EXPECT_LT(oracle::max_abs(tensor_product(tensor_product(a, b), c) -
                            tensor_product(a, tensor_product(b, c))),
            1e-13);
}

TEST(PartialTrace, ProductState) {
  std::mt19937_64 rng(1);
  const CMatrix ra = oracle::random_density(3, rng), rb = oracle::random_density(2, rng);
  const CMatrix s = oracle::kron(ra, rb);
  EXPECT_LT(oracle::max_abs(partial_trace(s, {3, 2}, Subsystem::A) - rb), 1e-14);
  EXPECT_LT(oracle::max_abs(partial_trace(s, {3, 2}, Subsystem::B) - ra), 1e-14);
}

TEST(PartialTrace, MaximallyEntangledMarginal) {
  for (Index d = 2; d <= 4; ++d) {
    const CMatrix m = partial_trace(oracle::psi_plus(d), {d, d}, Subsystem::A);
    EXPECT_LT(oracle::max_abs(m - CMatrix::Identity(d, d) / double(d)), 1e-14);
  }
}

TEST(PartialTrace, MatchesSummationOracle) {
  std::mt19937_64 rng(2);
  for (Index da = 1; da <= 4; ++da) {
    for (Index db = 1; db <= 4; ++db) {
      const CMatrix m = oracle::random_matrix(da * db, da * db, rng);
      EXPECT_LT(oracle::max_abs(partial_trace(m, {da, db}, Subsystem::A) - oracle::trace_a(m, da, db)),
                1e-13);
      EXPECT_LT(oracle::max_abs(partial_trace(m, {da, db}, Subsystem::B) - oracle::trace_b(m, da, db)),
                1e-13);
      EXPECT_LT(std::abs(partial_trace(m, {da, db}, Subsystem::A).trace() - m.trace()), 1e-12);
    }
  }
}

TEST(PartialTrace, RejectsWrongDims) {
  EXPECT_THROW(partial_trace(CMatrix::Identity(5, 5), {2, 2}, Subsystem::A), DimensionMismatch);
}

TEST(PartialTranspose, ProductStateTransposesB) {
  std::mt19937_64 rng(3);
  const CMatrix ra = oracle::random_density(2, rng), rb = oracle::random_density(3, rng);
  EXPECT_LT(oracle::max_abs(partial_transpose(oracle::kron(ra, rb), {2, 3}, Subsystem::B) -
                            oracle::kron(ra, rb.transpose())),
            1e-14);
}

TEST(PartialTranspose, InvolutionAndOracle) {
  std::mt19937_64 rng(4);
  for (Index da = 1; da <= 3; ++da) {
    for (Index db = 1; db <= 3; ++db) {
      const CMatrix m = oracle::random_matrix(da * db, da * db, rng);
      const CMatrix t = partial_transpose(m, {da, db}, Subsystem::B);
      EXPECT_LT(oracle::max_abs(t - oracle::transpose_b(m, da, db)), 1e-14);
      EXPECT_LT(oracle::max_abs(partial_transpose(t, {da, db}, Subsystem::B) - m), 1e-14);
      // T_A = full transpose composed with T_B.
      EXPECT_LT(oracle::max_abs(partial_transpose(m, {da, db}, Subsystem::A) - t.transpose()), 1e-14);
    }
  }
}

TEST(PartialTranspose, BellStateSpectrum) {
  const RVector ev = eigenvalues(partial_transpose(oracle::psi_plus(2), {2, 2}, Subsystem::B));
  EXPECT_NEAR(ev(0), -0.5, 1e-14);
  for (int i = 1; i < 4; ++i) EXPECT_NEAR(ev(i), 0.5, 1e-14);
}

TEST(SwapOperator, SmallCases) {
  EXPECT_EQ(swap_operator(1), CMatrix::Identity(1, 1));
  const CMatrix e = swap_operator(2);
  CVector ket01 = CVector::Zero(4);
  ket01(1) = 1.0;
  CVector ket10 = CVector::Zero(4);
  ket10(2) = 1.0;
  EXPECT_EQ(e * ket01, ket10);
  EXPECT_THROW(swap_operator(0), DimensionMismatch);
}

TEST(SwapOperator, ExchangesFactorsAndSquaresToIdentity) {
  std::mt19937_64 rng(6);
  for (Index d = 1; d <= 4; ++d) {
    const CMatrix e = swap_operator(d);
    EXPECT_EQ(e, oracle::swap(d));
    EXPECT_LT(oracle::max_abs(e * e - CMatrix::Identity(d * d, d * d)), 1e-15);
    const CMatrix a = oracle::random_matrix(d, d, rng), b = oracle::random_matrix(d, d, rng);
    EXPECT_LT(oracle::max_abs(e * oracle::kron(a, b) * e - oracle::kron(b, a)), 1e-13);
  }
}

TEST(MinEigenvalue, Examples) {
  EXPECT_NEAR(min_eigenvalue(CMatrix::Identity(3, 3)), 1.0, 1e-15);
  EXPECT_NEAR(min_eigenvalue(diag2(0.2, 0.8)), 0.2, 1e-15);
  // eigenvalues of rho(lambda): (1-lambda)/d^2 three times, (1-lambda)/d^2 + lambda once.
  EXPECT_NEAR(min_eigenvalue(oracle::isotropic(2, 1.0 / 3.0)), 1.0 / 6.0, 1e-14);
}

TEST(Eigh, ReconstructsUpTo16) {
  std::mt19937_64 rng(7);
  for (Index n : {1, 2, 5, 9, 16}) {
    const CMatrix h = oracle::random_hermitian(n, rng);
    const Spectrum sp = eigh(h);
    EXPECT_LT(oracle::max_abs(sp.vectors * sp.values.asDiagonal() * sp.vectors.adjoint() - h), 1e-12);
    for (Index i = 1; i < n; ++i) EXPECT_LE(sp.values(i - 1), sp.values(i));
  }
}

TEST(Eigh, RejectsNonHermitian) {
  CMatrix m = CMatrix::Identity(2, 2);
  m(0, 1) = 1.0;
  EXPECT_THROW(eigh(m), InvariantViolation);
  EXPECT_THROW(min_eigenvalue(m), InvariantViolation);
}

TEST(PsdPower, InverseSquareRoot) {
  std::mt19937_64 rng(8);
  const CMatrix r = oracle::random_density(3, rng);
  const CMatrix s = psd_power(r, -0.5);
  EXPECT_LT(oracle::max_abs(s * r * s - CMatrix::Identity(3, 3)), 1e-10);
}

TEST(SmallestSingularValue, KnownMatrices) {
  EXPECT_NEAR(smallest_singular_value(diag2(3.0, 0.5)), 0.5, 1e-15);
  EXPECT_NEAR(smallest_singular_value(diag2(1.0, 0.0)), 0.0, 1e-15);
}

TEST(BipartiteState, Invariants) {
  EXPECT_NO_THROW(BipartiteState::from_matrix(oracle::psi_plus(2), {2, 2}));
  CMatrix nonherm = CMatrix::Identity(4, 4) / 4.0;
  nonherm(0, 1) = 0.1;
  EXPECT_THROW(BipartiteState::from_matrix(nonherm, {2, 2}), InvariantViolation);
  CMatrix neg = CMatrix::Identity(4, 4) / 2.0;
  neg(0, 0) = -0.5;
  EXPECT_THROW(BipartiteState::from_matrix(neg, {2, 2}), InvariantViolation);
  EXPECT_THROW(BipartiteState::from_matrix(CMatrix::Identity(4, 4), {2, 2}), InvariantViolation);
  EXPECT_NO_THROW(BipartiteState::from_matrix(CMatrix::Identity(4, 4), {2, 2},
                                              Normalization::Unnormalized));
  EXPECT_THROW(BipartiteState::from_matrix(CMatrix::Identity(4, 4) / 4.0, {2, 3}), DimensionMismatch);
}

TEST(BipartiteState, ComponentIndexConvention) {
  std::mt19937_64 rng(9);
  const CMatrix r = oracle::random_density(6, rng);
  const BipartiteState s = BipartiteState::from_matrix(r, {2, 3});
  // composite index (m, r) -> m * dB + r
  EXPECT_EQ(s.component(1, 0, 2, 1), s.matrix()(1 * 3 + 2, 0 * 3 + 1));
}

TEST(HermitianCoordinates, OrthonormalRoundTrip) {
  std::mt19937_64 rng(10);
  for (Index d = 1; d <= 4; ++d) {
    const CMatrix h = oracle::random_hermitian(d, rng);
    const RVector x = hermitian_coordinates(h);
    ASSERT_EQ(x.size(), d * d);
    EXPECT_LT(oracle::max_abs(hermitian_from_coordinates(x, d) - h), 1e-13);
    // Coordinates preserve the Hilbert-Schmidt norm.
    EXPECT_NEAR(x.norm(), h.norm(), 1e-12);
    for (Index j = 0; j < d * d; ++j) {
      for (Index k = 0; k < d * d; ++k) {
        const Complex ip = (hermitian_basis_element(d, j).adjoint() * hermitian_basis_element(d, k)).trace();
        EXPECT_NEAR(ip.real(), j == k ? 1.0 : 0.0, 1e-14);
      }
    }
  }
}

TEST(ContentDigest, DeterministicAndSensitive) {
  const CMatrix m = oracle::isotropic(2, 0.25);
  const std::string h = content_digest(m, {2, 2});
  EXPECT_EQ(h.rfind("sha256:", 0), 0u);
  EXPECT_EQ(h.size(), 7u + 64u);
  EXPECT_EQ(h, content_digest(m, {2, 2}));
  CMatrix p = m;
  p(0, 0) += 1e-15;
  EXPECT_NE(h, content_digest(p, {2, 2}));
  EXPECT_NE(content_digest(CMatrix::Identity(4, 4), {1, 4}), content_digest(CMatrix::Identity(4, 4), {2, 2}));
}

}  // namespace
}  // namespace sepcert
