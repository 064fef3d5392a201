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
#include <vector>

#include "oracles.hpp"
#include "sepcert/maps.hpp"

namespace sepcert {
namespace {

CMatrix ket0_projector(Index d) {
  CMatrix p = CMatrix::Zero(d, d);
  p(0, 0) = 1.0;
  return p;
}

std::vector<CMatrix> random_kraus(Index d_in, Index d_out, int n, std::mt19937_64& rng) {
  std::vector<CMatrix> ks;
  for (int k = 0; k < n; ++k) ks.push_back(oracle::random_matrix(d_out, d_in, rng));
  return ks;
}

// Output entry (k,l) = sum_rs x[k,l,r,s] rho(r,s), evaluated with coefficient().
CMatrix coefficient_apply(const LocalMap& map, const CMatrix& rho) {
  CMatrix out = CMatrix::Zero(map.d_out(), map.d_out());
  for (Index k = 0; k < map.d_out(); ++k)
    for (Index l = 0; l < map.d_out(); ++l)
      for (Index r = 0; r < map.d_in(); ++r)
        for (Index s = 0; s < map.d_in(); ++s) out(k, l) += map.coefficient(k, l, r, s) * rho(r, s);
  return out;
}

TEST(Apply, IdentityAndTraceAndReplace) {
  std::mt19937_64 rng(1);
  const CMatrix rho = oracle::random_density(3, rng);
  EXPECT_LT(oracle::max_abs(sepcert::apply(LocalMap::identity(3), rho) - rho), 1e-15);
  const LocalMap tr = LocalMap::trace_and_replace(ket0_projector(2), 3);
  EXPECT_LT(oracle::max_abs(sepcert::apply(tr, rho) - ket0_projector(2)), 1e-14);
}

TEST(Apply, KrausMapMatchesOracle) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    const Index din = 2 + trial % 2, dout = 2 + (trial / 2) % 3;
    const auto ks = random_kraus(din, dout, 1 + trial % 3, rng);
    const LocalMap m = LocalMap::from_kraus(ks);
    const CMatrix rho = oracle::random_hermitian(din, rng);
    const CMatrix want = oracle::kraus_apply(ks, rho);
    EXPECT_LT(oracle::max_abs(sepcert::apply(m, rho) - want), 1e-12);
    EXPECT_LT(oracle::max_abs(coefficient_apply(m, rho) - want), 1e-12);
    EXPECT_TRUE(m.is_hermiticity_preserving());
  }
}

TEST(Apply, HermiticityPreservedOnHermitianInputs) {
  std::mt19937_64 rng(3);
  const auto ks = random_kraus(3, 2, 2, rng);
  const LocalMap m = LocalMap::from_kraus(ks) * 0.7 + LocalMap::from_kraus(random_kraus(3, 2, 1, rng)) * -0.4 +
                     LocalMap::zero(3, 2);
  for (int i = 0; i < 20; ++i) {
    const CMatrix out = sepcert::apply(m, oracle::random_hermitian(3, rng));
    EXPECT_LT(oracle::max_abs(out - out.adjoint()), 1e-13);
  }
}

TEST(Apply, RejectsWrongShape) {
  EXPECT_THROW(sepcert::apply(LocalMap::identity(2), CMatrix::Identity(3, 3)), DimensionMismatch);
}

TEST(ApplyLocalB, IdentityAndProductInputs) {
  std::mt19937_64 rng(4);
  const CMatrix ra = oracle::random_density(2, rng), rb = oracle::random_density(3, rng);
  const CMatrix s = oracle::kron(ra, rb);
  EXPECT_LT(oracle::max_abs(apply_local_B(LocalMap::identity(3), s, {2, 3}) - s), 1e-15);
  const auto ks = random_kraus(3, 2, 2, rng);
  const LocalMap m = LocalMap::from_kraus(ks);
  EXPECT_LT(oracle::max_abs(apply_local_B(m, s, {2, 3}) - oracle::kron(ra, oracle::kraus_apply(ks, rb))),
            1e-12);
}

TEST(ApplyLocalB, TransposeOnBellIsHalfSwap) {
  const CMatrix out = apply_local_B(LocalMap::transpose(2), oracle::psi_plus(2), {2, 2});
  EXPECT_LT(oracle::max_abs(out - oracle::swap(2) / 2.0), 1e-15);
}

TEST(ApplyLocalB, EntangledInputMatchesKrausOracle) {
  std::mt19937_64 rng(5);
  const auto ks = random_kraus(2, 3, 2, rng);
  const CMatrix s = oracle::random_density(4, rng);
  EXPECT_LT(oracle::max_abs(apply_local_B(LocalMap::from_kraus(ks), s, {2, 2}) -
                            oracle::kraus_apply_b(ks, s, 2, 2)),
            1e-12);
}

TEST(ApplyLocalA, MirrorsLocalBUnderSwap) {
  std::mt19937_64 rng(6);
  const auto ks = random_kraus(2, 2, 2, rng);
  const LocalMap m = LocalMap::from_kraus(ks);
  const CMatrix s = oracle::random_density(4, rng);
  const CMatrix e = oracle::swap(2);
  EXPECT_LT(oracle::max_abs(apply_local_A(m, s, {2, 2}) - e * apply_local_B(m, e * s * e, {2, 2}) * e),
            1e-12);
}

TEST(ApplyLocalSum, LinearityExamples) {
  std::mt19937_64 rng(7);
  const BipartiteState s = BipartiteState::from_matrix(oracle::random_density(4, rng), {2, 2});
  EXPECT_LT(oracle::max_abs(apply_local_sum(LocalMap::zero(2, 2), LocalMap::identity(2), s) - s.matrix()),
            1e-15);
  EXPECT_LT(oracle::max_abs(apply_local_sum(LocalMap::identity(2), LocalMap::identity(2), s) -
                            2.0 * s.matrix()),
            1e-15);
  const auto ka = random_kraus(2, 2, 1, rng), kb = random_kraus(2, 2, 2, rng);
  const CMatrix e = oracle::swap(2);
  const CMatrix want = oracle::kraus_apply_b(kb, s.matrix(), 2, 2) +
                       e * oracle::kraus_apply_b(ka, e * s.matrix() * e, 2, 2) * e;
  EXPECT_LT(oracle::max_abs(apply_local_sum(LocalMap::from_kraus(ka), LocalMap::from_kraus(kb), s) - want),
            1e-12);
}

TEST(Choi, IdentityIsBellProjector) {
  const ChoiMatrix c = choi_of_map(LocalMap::identity(2));
  EXPECT_LT(oracle::max_abs(c.z - oracle::psi_plus(2)), 1e-15);
}

TEST(Choi, TraceAndReplace) {
  // (1/2) sum_rs |r><s| (x) delta_rs |0><0| = (1/2) I (x) |0><0|
  const ChoiMatrix c = choi_of_map(LocalMap::trace_and_replace(ket0_projector(2), 2));
  EXPECT_LT(oracle::max_abs(c.z - 0.5 * oracle::kron(CMatrix::Identity(2, 2), ket0_projector(2))), 1e-15);
  const LocalMap back = map_of_choi(ChoiMatrix{2, 2, 0.5 * oracle::kron(CMatrix::Identity(2, 2),
                                                                         ket0_projector(2))});
  std::mt19937_64 rng(8);
  const CMatrix rho = oracle::random_density(2, rng);
  EXPECT_LT(oracle::max_abs(sepcert::apply(back, rho) - ket0_projector(2)), 1e-14);
}

TEST(Choi, InverseOfBellIsIdentity) {
  const LocalMap m = map_of_choi(ChoiMatrix{2, 2, oracle::psi_plus(2)});
  EXPECT_LT(oracle::max_abs(m.transfer() - LocalMap::identity(2).transfer()), 1e-14);
}

TEST(Choi, CompletelyPositiveMapsHavePsdChoi) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const LocalMap m = LocalMap::from_kraus(random_kraus(2 + trial % 2, 2 + trial % 3, 1 + trial % 3, rng));
    EXPECT_GT(oracle::min_eig(choi_of_map(m).z), -1e-12);
  }
  // Transpose is positive but not completely positive.
  EXPECT_LT(oracle::min_eig(choi_of_map(LocalMap::transpose(2)).z), -0.4);
}

TEST(Choi, RoundTripAndBasisSum) {
  std::mt19937_64 rng(10);
  for (Index din = 1; din <= 3; ++din) {
    for (Index dout = 1; dout <= 3; ++dout) {
      CMatrix t = oracle::random_matrix(dout * dout, din * din, rng);
      const LocalMap m(din, dout, t);
      const ChoiMatrix c = choi_of_map(m);
      EXPECT_LT(oracle::max_abs(map_of_choi(c).transfer() - t), 1e-13);
      // Direct definition: Z = (1/d_in) sum_rs |r><s| (x) m(|r><s|).
      CMatrix z = CMatrix::Zero(din * dout, din * dout);
      for (Index r = 0; r < din; ++r)
        for (Index s = 0; s < din; ++s) {
          CMatrix ers = CMatrix::Zero(din, din);
          ers(r, s) = 1.0;
          z += oracle::kron(ers, coefficient_apply(m, ers)) / static_cast<double>(din);
        }
      EXPECT_LT(oracle::max_abs(c.z - z), 1e-13);
    }
  }
}

TEST(Compose, IdentityUnitAndPointwise) {
  std::mt19937_64 rng(11);
  const auto k1 = random_kraus(2, 3, 2, rng), k2 = random_kraus(3, 2, 1, rng);
  const LocalMap inner = LocalMap::from_kraus(k1), outer = LocalMap::from_kraus(k2);
  EXPECT_LT(oracle::max_abs(compose(LocalMap::identity(3), inner).transfer() - inner.transfer()), 1e-14);
  EXPECT_LT(oracle::max_abs(compose(inner, LocalMap::identity(2)).transfer() - inner.transfer()), 1e-14);
  const CMatrix rho = oracle::random_density(2, rng);
  EXPECT_LT(oracle::max_abs(sepcert::apply(compose(outer, inner), rho) -
                            oracle::kraus_apply(k2, oracle::kraus_apply(k1, rho))),
            1e-12);
  EXPECT_THROW(compose(inner, inner), DimensionMismatch);
}

TEST(LocalMap, SandwichAndLinearity) {
  std::mt19937_64 rng(12);
  const CMatrix a = oracle::random_matrix(2, 2, rng);
  const CMatrix rho = oracle::random_density(2, rng);
  EXPECT_LT(oracle::max_abs(sepcert::apply(LocalMap::sandwich(a, a.adjoint()), rho) - a * rho * a.adjoint()),
            1e-13);
  const LocalMap s = LocalMap::identity(2) * 2.0 + LocalMap::transpose(2);
  EXPECT_LT(oracle::max_abs(sepcert::apply(s, rho) - (2.0 * rho + rho.transpose())), 1e-14);
  EXPECT_THROW(LocalMap::identity(2) + LocalMap::identity(3), DimensionMismatch);
}

// Property: the composite map is positive on product states whenever both parts are CP.
TEST(MapsProperty, CompositionOfCpMapsIsPositive) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    const LocalMap f = LocalMap::from_kraus(random_kraus(2, 2, 2, rng));
    const LocalMap g = LocalMap::from_kraus(random_kraus(2, 2, 1, rng));
    const CMatrix out = sepcert::apply(compose(f, g), oracle::pure(oracle::random_unit(2, rng)));
    EXPECT_GT(oracle::min_eig(out), -1e-12);
  }
}

}  // namespace
}  // namespace sepcert
