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

#include <algorithm>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "sepcert/criteria.hpp"
#include "sepcert/states.hpp"

namespace sepcert {
namespace {

BipartiteState state(const CMatrix& m, Index d) { return BipartiteState::from_matrix(m, {d, d}); }

TEST(TildeSigma, MaximallyMixedMarginalIsUnchanged) {
  for (Index d = 2; d <= 4; ++d) {
    const BipartiteState s = isotropic_state(d, 0.4);
    EXPECT_LT(oracle::max_abs(tilde_sigma(s) - s.matrix()), 1e-14);
  }
}

TEST(TildeSigma, ProductStateCancels) {
  std::mt19937_64 rng(1);
  const CMatrix ra = oracle::random_density(3, rng), rb = oracle::random_density(3, rng);
  const CMatrix st = tilde_sigma(state(oracle::kron(ra, rb), 3));
  EXPECT_LT(oracle::max_abs(st - oracle::kron(ra, CMatrix::Identity(3, 3)) / 3.0), 1e-12);
}

TEST(TildeSigma, MarginalIsMaximallyMixed) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const Index d = 2 + trial % 2;
    const CMatrix st = tilde_sigma(state(oracle::random_density(d * d, rng), d));
    EXPECT_LT(oracle::max_abs(oracle::trace_a(st, d, d) - CMatrix::Identity(d, d) / double(d)), 1e-11);
    EXPECT_NEAR(st.trace().real(), 1.0, 1e-11);
  }
}

TEST(TildeSigma, SingularMarginal) {
  CMatrix p0 = CMatrix::Zero(2, 2);
  p0(0, 0) = 1.0;
  const BipartiteState s = state(oracle::kron(CMatrix::Identity(2, 2) / 2.0, p0), 2);
  EXPECT_THROW(tilde_sigma(s), SingularMarginal);
  const CriterionReport r = corollary1_check(s);
  EXPECT_EQ(r.verdict, CriterionVerdict::Inconclusive);
  EXPECT_FALSE(r.note.empty());
}

TEST(Corollary1, MaximallyMixedIsSeparable) {
  for (Index d = 2; d <= 5; ++d) {
    const CriterionReport r = corollary1_check(isotropic_state(d, 0.0));
    EXPECT_EQ(r.verdict, CriterionVerdict::Separable);
    EXPECT_NEAR(r.statistic, 1.0 / double(d * d), 1e-14);
    EXPECT_NEAR(r.threshold, 1.0 / double(d * (d + 1)), 1e-15);
  }
}

TEST(Corollary1, IsotropicBoundaryClosedForm) {
  // statistic = (1 - lambda)/d^2, threshold 1/(d(d+1)): equal exactly at lambda = 1/(d+1).
  for (Index d = 2; d <= 4; ++d) {
    const double lc = 1.0 / (d + 1.0);
    EXPECT_EQ(corollary1_check(isotropic_state(d, lc)).verdict, CriterionVerdict::Separable);
    EXPECT_EQ(corollary1_check(isotropic_state(d, lc - 1e-9)).verdict, CriterionVerdict::Separable);
    EXPECT_EQ(corollary1_check(isotropic_state(d, lc + 1e-9)).verdict, CriterionVerdict::Inconclusive);
    EXPECT_EQ(corollary1_check(isotropic_state(d, 1.0)).verdict, CriterionVerdict::Inconclusive);
  }
}

TEST(Corollary1, GbBeatingState) {
  const CriterionReport r = corollary1_check(sigma_epsilon(3, 0.25));
  EXPECT_EQ(r.verdict, CriterionVerdict::Separable);
  EXPECT_NEAR(r.statistic, 1.0 / 12.0, 1e-14);
}

TEST(GurvitsBarnum, Examples) {
  const CriterionReport mixed = gurvits_barnum_check(isotropic_state(3, 0.0));
  EXPECT_EQ(mixed.verdict, CriterionVerdict::Separable);
  EXPECT_NEAR(mixed.statistic, 0.0, 1e-30);
  EXPECT_NEAR(gb_radius_squared(2), 1.0 / 12.0, 1e-16);
  EXPECT_NEAR(gb_radius_squared(3), 1.0 / 72.0, 1e-16);

  const CriterionReport r = gurvits_barnum_check(sigma_epsilon(3, 0.25));
  EXPECT_EQ(r.verdict, CriterionVerdict::Inconclusive);
  EXPECT_NEAR(r.statistic, 1.0 / 18.0, 1e-14);
  EXPECT_NEAR(r.threshold, 1.0 / 72.0, 1e-16);
}

TEST(SigmaEpsilon, SpectrumAndTrace) {
  for (Index d = 2; d <= 4; ++d) {
    const double dd = double(d);
    const double base = 1.0 / (dd * (dd + 1.0));
    for (double eps : {0.0, 0.5 / (dd + 1.0), 1.0 / (dd + 1.0)}) {
      const BipartiteState s = sigma_epsilon(d, eps);
      EXPECT_NEAR(s.matrix().trace().real(), 1.0, 1e-14);
      // closed form: one eigenvalue eps + base, the rest base + delta
      const double delta = (1.0 - eps - dd / (dd + 1.0)) / (dd * dd - 1.0);
      std::vector<double> want(static_cast<std::size_t>(d * d - 1), base + delta);
      want.push_back(eps + base);
      std::sort(want.begin(), want.end());
      const RVector ev = oracle::spectrum(s.matrix());
      for (Index i = 0; i < d * d; ++i) EXPECT_NEAR(ev(i), want[static_cast<std::size_t>(i)], 1e-14);
      EXPECT_LT(oracle::max_abs(oracle::trace_a(s.matrix(), d, d) - CMatrix::Identity(d, d) / dd), 1e-14);
      EXPECT_EQ(corollary1_check(s).verdict, CriterionVerdict::Separable);
    }
  }
  const RVector ev3 = oracle::spectrum(sigma_epsilon(3, 0.25).matrix());
  EXPECT_NEAR(ev3(8), 1.0 / 3.0, 1e-14);
  for (int i = 0; i < 8; ++i) EXPECT_NEAR(ev3(i), 1.0 / 12.0, 1e-14);
  EXPECT_THROW(sigma_epsilon(3, 0.3), InvariantViolation);
  EXPECT_THROW(sigma_epsilon(3, -0.01), InvariantViolation);
}

TEST(GbGap, ClosedForm) {
  EXPECT_NEAR(gb_gap(3, 0.25), 1.0 / 24.0, 1e-14);
  EXPECT_NEAR(gb_gap(4, 0.2), 1.0 / 30.0, 1e-14);
  EXPECT_NEAR(gb_gap(2, 1.0 / 3.0), 0.0, 1e-14);
  for (Index d = 2; d <= 6; ++d) {
    const double dd = double(d);
    EXPECT_NEAR(gb_gap(d, 1.0 - dd / (dd + 1.0)), (dd - 2.0) / (dd * dd * dd - dd), 1e-12);
  }
}

TEST(Ppt, Examples) {
  std::mt19937_64 rng(3);
  const CMatrix prod = oracle::kron(oracle::random_density(2, rng), oracle::random_density(2, rng));
  const CriterionReport p = ppt_check(state(prod, 2));
  EXPECT_EQ(p.verdict, CriterionVerdict::Separable);
  EXPECT_GE(p.statistic, 0.0);
  const CriterionReport b = ppt_check(maximally_entangled(2));
  EXPECT_EQ(b.verdict, CriterionVerdict::Entangled);
  EXPECT_NEAR(b.statistic, -0.5, 1e-14);
  // 3x3 PPT states are not certified by PPT alone.
  EXPECT_EQ(ppt_check(isotropic_state(3, 0.0)).verdict, CriterionVerdict::Inconclusive);
}

TEST(Ppt, IsotropicBoundary) {
  for (double lambda : {0.0, 0.2, 1.0 / 3.0 - 1e-6, 1.0 / 3.0 + 1e-6, 0.5, 1.0}) {
    const bool entangled = ppt_check(isotropic_state(2, lambda)).verdict == CriterionVerdict::Entangled;
    EXPECT_EQ(entangled, lambda > 1.0 / 3.0) << lambda;
  }
}

// Property: the three criteria never contradict each other.
TEST(CriteriaProperty, NeverContradict) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const Index d = 2 + trial % 2;
    const Index n = d * d;
    CMatrix m;
    switch (trial % 3) {
      case 0: m = oracle::random_density(n, rng); break;
      case 1: m = oracle::isotropic(d, u(rng)); break;
      default: {
        // small perturbation of the maximally mixed state
        const CMatrix h = oracle::random_hermitian(n, rng);
        m = CMatrix::Identity(n, n) / double(n) + 0.05 * u(rng) * (h - h.trace() / double(n) * CMatrix::Identity(n, n)) / h.norm();
      }
    }
    const BipartiteState s = state(m, d);
    const bool ppt_entangled = ppt_check(s).verdict == CriterionVerdict::Entangled;
    if (corollary1_check(s).verdict == CriterionVerdict::Separable) EXPECT_FALSE(ppt_entangled);
    if (gurvits_barnum_check(s).verdict == CriterionVerdict::Separable) EXPECT_FALSE(ppt_entangled);
  }
}

// Property: states on the GB sphere are PPT.
TEST(CriteriaProperty, GbSphereIsPpt) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const Index d = 2 + trial % 3;
    const Index n = d * d;
    CMatrix h = oracle::random_hermitian(n, rng);
    h -= h.trace() / double(n) * CMatrix::Identity(n, n);
    h *= std::sqrt(gb_radius_squared(d)) / h.norm();
    const CMatrix m = CMatrix::Identity(n, n) / double(n) + h;
    EXPECT_GT(oracle::min_eig(oracle::transpose_b(m, d, d)), -1e-10);
  }
}

}  // namespace
}  // namespace sepcert
