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

#include <limits>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "sepcert/detector.hpp"
#include "sepcert/repro.hpp"
#include "sepcert/sdp.hpp"

namespace sepcert {
namespace {

CMatrix diag2(double a, double b) {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

// A(x) = diag(x, 1 - x)
LmiProblem scalar_problem() {
  LmiProblem p;
  p.n_vars = 1;
  p.equality_matrix.resize(0, 1);
  const std::vector<CMatrix> coef{diag2(1.0, -1.0)};
  p.blocks.push_back(LmiBlock::from_matrices(diag2(0.0, 1.0), coef));
  return p;
}

TEST(EliminateEqualities, IdentityConstraints) {
  LmiProblem p;
  p.n_vars = 3;
  p.equality_matrix = RMatrix::Identity(3, 3);
  p.equality_rhs = RVector::LinSpaced(3, 1.0, 3.0);
  const EqualityReduction r = eliminate_equalities(p);
  EXPECT_TRUE(r.consistent);
  EXPECT_EQ(r.nullspace.cols(), 0);
  EXPECT_LT((r.particular - p.equality_rhs).norm(), 1e-14);
}

TEST(EliminateEqualities, SingleRow) {
  LmiProblem p;
  p.n_vars = 2;
  p.equality_matrix = RMatrix::Ones(1, 2);
  p.equality_rhs = RVector::Ones(1);
  const EqualityReduction r = eliminate_equalities(p);
  EXPECT_TRUE(r.consistent);
  ASSERT_EQ(r.nullspace.cols(), 1);
  EXPECT_NEAR(r.particular(0), 0.5, 1e-14);
  EXPECT_NEAR(r.particular(1), 0.5, 1e-14);
  EXPECT_NEAR((p.equality_matrix * r.nullspace).norm(), 0.0, 1e-14);
}

TEST(EliminateEqualities, DetectionSystemHasNoNullity) {
  const BaseState base = random_faithful_base(2, 16, 3);
  const LinearSystem sys = assemble_linear_system(base.state, base.state);
  LmiProblem p;
  p.n_vars = sys.matrix.cols();
  p.equality_matrix = sys.matrix;
  p.equality_rhs = sys.rhs;
  const EqualityReduction r = eliminate_equalities(p);
  EXPECT_TRUE(r.consistent);
  EXPECT_EQ(r.nullspace.cols(), 0);
  EXPECT_EQ(sys.matrix.rows(), 16);
  EXPECT_EQ(sys.matrix.cols(), 16);
}

TEST(EliminateEqualities, Inconsistent) {
  LmiProblem p;
  p.n_vars = 2;
  p.equality_matrix = RMatrix::Zero(2, 2);
  p.equality_matrix(0, 0) = 1.0;
  p.equality_matrix(1, 0) = 1.0;
  p.equality_rhs = RVector(2);
  p.equality_rhs << 1.0, 2.0;
  EXPECT_FALSE(eliminate_equalities(p).consistent);
  p.blocks.push_back(LmiBlock::from_matrices(CMatrix::Identity(1, 1),
                                             std::vector<CMatrix>{CMatrix::Zero(1, 1), CMatrix::Zero(1, 1)}));
  const FeasResult r = solve_feasibility(p);
  EXPECT_EQ(r.status, FeasStatus::Inconsistent);
}

TEST(SolveFeasibility, ScalarLmi) {
  const FeasResult r = solve_feasibility(scalar_problem());
  EXPECT_EQ(r.status, FeasStatus::Feasible);
  EXPECT_NEAR(r.margin, 0.5, 1e-6);
  ASSERT_EQ(r.x.size(), 1);
  EXPECT_NEAR(r.x(0), 0.5, 1e-5);
}

TEST(SolveFeasibility, ConstantOnlyInfeasible) {
  LmiProblem p;
  p.n_vars = 0;
  p.equality_matrix.resize(0, 0);
  p.blocks.push_back(LmiBlock::from_matrices(diag2(-1.0, 2.0), std::vector<CMatrix>{}));
  const FeasResult r = solve_feasibility(p);
  EXPECT_EQ(r.status, FeasStatus::NotFound);
  EXPECT_NEAR(r.margin, -1.0, 1e-12);
}

TEST(SolveFeasibility, DetectionProblemAtKnownPoint) {
  // Target equal to the base: the identity map is the only solution and its
  // margin is the smallest eigenvalue over the B factors.
  DetectorOptions opts;
  opts.target_margin = std::numeric_limits<double>::infinity();
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const BaseState base = random_faithful_base(2, 5, seed);
    double want = std::numeric_limits<double>::infinity();
    for (const ProductTerm& t : base.ensemble.terms) want = std::min(want, oracle::min_eig(t.rho_b));
    const DetectionOutcome out = detect_basic_sdp(base, base.state, opts);
    EXPECT_EQ(out.verdict, Verdict::Separable);
    EXPECT_GE(out.diagnostics.margin, want - 1e-8);
    EXPECT_NEAR(out.diagnostics.margin, want, 1e-7);
  }
}

TEST(SolveFeasibility, ValidatesInput) {
  LmiProblem p = scalar_problem();
  p.n_vars = 2;
  EXPECT_THROW(solve_feasibility(p), DimensionMismatch);
  LmiProblem q = scalar_problem();
  CMatrix c = diag2(0.0, 1.0);
  c(0, 1) = 1.0;
  q.blocks[0].constant = c;
  EXPECT_THROW(solve_feasibility(q), InvariantViolation);
}

// Property: every Feasible answer re-evaluates as feasible, the history is monotone.
TEST(SdpProperty, SoundnessAndMonotoneHistory) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double margin = trial % 2 == 0 ? std::pow(10.0, -3.0 * u(rng)) : 0.0;
    const Index n = 1 + trial % 6;
    PlantedLmi pl = planted_lmi(n, {2, 3}, n / 3, margin, rng);
    if (trial % 2 == 1) {
      // shift the constants so the planted point is infeasible by 0.5; no
      // guarantee either way, only soundness is checked
      for (LmiBlock& b : pl.problem.blocks) b.constant -= 0.5 * CMatrix::Identity(b.size, b.size);
    }
    const FeasResult r = solve_feasibility(pl.problem);
    for (std::size_t k = 1; k < r.margin_history.size(); ++k) {
      EXPECT_GE(r.margin_history[k], r.margin_history[k - 1]);
    }
    if (r.status == FeasStatus::Feasible) {
      EXPECT_GT(evaluate_margin(pl.problem, r.x), 0.0);
      EXPECT_LE(equality_residual(pl.problem, r.x), 1e-8 * std::max(1.0, pl.problem.equality_rhs.norm()));
    }
    if (trial % 2 == 0) EXPECT_EQ(r.status, FeasStatus::Feasible);
  }
}

TEST(SdpProperty, PlantedMarginRecovered) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 8; ++trial) {
    const Index n = 5 + 6 * trial;
    const double margin = std::pow(10.0, -static_cast<double>(trial % 4));
    const PlantedLmi pl = planted_lmi(n, {16, 4}, n / 4, margin, rng);
    const FeasResult r = solve_feasibility(pl.problem);
    ASSERT_EQ(r.status, FeasStatus::Feasible) << trial;
    // Re-evaluated from the raw matrices, not through the library's block code.
    EXPECT_GE(planted_margin(pl, r.x), 0.9 * margin) << trial;
  }
}

TEST(SdpProperty, ScaleInvariance) {
  std::mt19937_64 rng(9);
  const PlantedLmi pl = planted_lmi(6, {3, 3}, 1, 0.1, rng);
  LmiProblem scaled = pl.problem;
  for (LmiBlock& b : scaled.blocks) {
    b.constant *= 10.0;
    b.coefficients *= 10.0;
  }
  const FeasResult a = solve_feasibility(pl.problem);
  const FeasResult b = solve_feasibility(scaled);
  ASSERT_EQ(a.status, FeasStatus::Feasible);
  ASSERT_EQ(b.status, FeasStatus::Feasible);
  EXPECT_NEAR(b.margin / a.margin, 10.0, 1e-3);
}

}  // namespace
}  // namespace sepcert
