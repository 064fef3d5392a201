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
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "sepcert/certificate.hpp"
#include "sepcert/maps.hpp"
#include "sepcert/sdp.hpp"
#include "sepcert/states.hpp"

namespace sepcert {

/// A separable state together with the decomposition it was assembled from.
struct BaseState {
  ProductEnsemble ensemble;
  BipartiteState state;

  static BaseState from_ensemble(const ProductEnsemble& e);
};

enum class DetectionMode { Analytical, Linear, BasicSdp, Enhanced };
enum class Verdict { Separable, Inconclusive };

std::string to_string(DetectionMode m);
std::string to_string(Verdict v);

struct TrialRecord {
  int index = 0;
  std::string source;  // "analytical", "table:<i>", "random:<seed>"
  DetectionMode mode = DetectionMode::Linear;
  Verdict verdict = Verdict::Inconclusive;
  double sigma_min = std::numeric_limits<double>::quiet_NaN();
  double margin = std::numeric_limits<double>::quiet_NaN();
  std::string note;
};

struct Diagnostics {
  double margin = std::numeric_limits<double>::quiet_NaN();  // min eig over mapped factors
  double scale = 1.0;
  double equality_residual = std::numeric_limits<double>::quiet_NaN();
  int iterations = 0;
  std::vector<TrialRecord> trials;
  std::vector<std::string> notes;
};

struct DetectionOutcome {
  Verdict verdict = Verdict::Inconclusive;
  DetectionMode mode = DetectionMode::Linear;
  std::optional<Certificate> certificate;  // set iff Separable
  std::optional<BaseState> base_used;
  Diagnostics diagnostics;
};

struct DetectorOptions {
  double eps_feas = kFeasibilityTol;
  double eps_eq = kEqualityTol;
  double cert_tol = kCertificateTol;
  double positivity_floor = 1e-9;  // linear mode: Lambda(rho_B^(i)) >= -floor
  double faithful_tol = kFaithfulTol;
  int max_iter = 500;
  /// Relative margin at which the solver may stop early. Far above eps_feas,
  /// so certificates stay clear of the clip floor.
  double target_margin = 1e-3;
};

/// Real equality system C y = b over the Choi coordinates y of a map
/// B(H_base_B) -> B(H_target_B) with (I (x) Lambda_y)(base) = target.
struct LinearSystem {
  Index d_in = 0;
  Index d_out = 0;
  RMatrix matrix;
  RVector rhs;
};

LinearSystem assemble_linear_system(const BipartiteState& base, const BipartiteState& target);

/// Unknowns (y_A, y_B) for [Lambda_A (x) I + I (x) Lambda_B](base) = target.
LinearSystem assemble_enhanced_system(const BipartiteState& base, const BipartiteState& target);

/// Map whose Choi matrix has Hermitian coordinates y.
LocalMap map_from_parameters(const RVector& y, Index d_in, Index d_out);

DetectionOutcome detect_linear(const BaseState& base, const BipartiteState& target,
                               const DetectorOptions& opts = {});
DetectionOutcome detect_basic_sdp(const BaseState& base, const BipartiteState& target,
                                  const DetectorOptions& opts = {});
DetectionOutcome detect_enhanced(const BaseState& base, const BipartiteState& target,
                                 const DetectorOptions& opts = {});

struct AutoPolicy {
  bool analytical = true;
  std::vector<BaseState> table;
  int n_bases = 8;
  std::uint64_t seed = 0;
  bool enhanced = true;
  int jobs = 1;
};

/// Eigenvalue criterion, then table bases, then random faithful bases.
/// Deterministic in policy.seed regardless of policy.jobs.
DetectionOutcome detect_auto(const BipartiteState& target, const AutoPolicy& policy,
                             const DetectorOptions& opts = {});

/// Seed of the k-th random base trial.
std::uint64_t trial_seed(std::uint64_t seed, int k);

/// Base of random trial k: random_separable(d, d, n, trial_seed(seed, k)) with
/// n drawn from [d^2, d^4 + 1].
BaseState random_trial_base(Index d, std::uint64_t seed, int k);

struct TableEntry {
  ProductEnsemble ensemble;
  std::string digest;
  double sigma_min = 0.0;
  std::uint64_t seed = 0;
  bool pruned = false;
  std::string pruned_by;
};

struct PruneOptions {
  int positivity_samples = 100;
  std::uint64_t seed = 0;
  double positivity_floor = 1e-9;
  DetectorOptions detector;
};

/// Flags entry j as pruned when some active entry i reaches it through a
/// basic-SDP map that is also positive on sampled PSD inputs.
std::vector<TableEntry> table_prune(std::vector<TableEntry> table, const PruneOptions& opts = {});

/// True when apply(map, rho) has min eigenvalue >= -floor on `samples` random
/// density matrices of random rank.
bool sampled_positive(const LocalMap& map, int samples, std::uint64_t seed, double floor = 1e-9);

}  // namespace sepcert
