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

#include "sepcert/detector.hpp"
#include "sepcert/maps.hpp"
#include "sepcert/sdp.hpp"

namespace sepcert {

inline constexpr const char* kVersion = "0.1.0";

// Workload generators shared by the acceptance suite, tests and benchmarks.

/// rho -> sum_k K_k rho K_k^H with complex Gaussian K_k (d_out x d_in).
LocalMap random_cp_map(Index d_in, Index d_out, Index n_kraus, std::mt19937_64& rng);

/// m / Tr(m) as a unit-trace state.
BipartiteState renormalized(const CMatrix& m, Dims dims);

/// random_separable(d, d, n_terms, .) retried with derived seeds until faithful.
BaseState random_faithful_base(Index d, Index n_terms, std::uint64_t seed);

/// I/d^2 + r H with H traceless Hermitian of unit Frobenius norm and
/// r = fraction * gb radius; separable for fraction <= 1.
BipartiteState gb_ball_state(Index d, double fraction, std::mt19937_64& rng);

/// Random LMI family with a known point whose margin is exactly `margin`.
struct PlantedLmi {
  LmiProblem problem;
  RVector point;
  double margin = 0.0;
  // Raw data kept apart from the problem for independent re-evaluation.
  std::vector<CMatrix> constants;
  std::vector<std::vector<CMatrix>> coefficients;
};

PlantedLmi planted_lmi(Index n_vars, const std::vector<Index>& block_sizes, Index n_equalities,
                       double margin, std::mt19937_64& rng);

/// min over blocks of min eig(A0 + sum_J x_J A_J), from the raw matrices.
double planted_margin(const PlantedLmi& p, const RVector& x);

struct AcceptanceOptions {
  std::uint64_t seed = 20261019;
  int jobs = 1;
};

struct AcceptanceResult {
  int id = 0;
  std::string title;
  bool pass = false;
  bool informational = false;
  std::string detail;
  double seconds = 0.0;
  double budget_seconds = 0.0;  // 0 means no runtime bound
};

AcceptanceResult accept_gb_gap(const AcceptanceOptions& o);
AcceptanceResult accept_isotropic_boundary(const AcceptanceOptions& o);
AcceptanceResult accept_constructive_certificate(const AcceptanceOptions& o);
AcceptanceResult accept_roundtrip_detection(const AcceptanceOptions& o);
AcceptanceResult accept_no_false_positives(const AcceptanceOptions& o);
AcceptanceResult accept_faithfulness(const AcceptanceOptions& o);
AcceptanceResult accept_solver_contract(const AcceptanceOptions& o);
AcceptanceResult accept_coverage_report(const AcceptanceOptions& o);

std::vector<AcceptanceResult> run_acceptance(const AcceptanceOptions& o);

/// "[ACCEPT] #n <title>: PASS|FAIL (<detail>; <t> s)"
std::string format_acceptance(const AcceptanceResult& r);

}  // namespace sepcert
