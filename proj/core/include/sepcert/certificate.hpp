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

#include <optional>
#include <string>
#include <vector>

#include "sepcert/maps.hpp"
#include "sepcert/states.hpp"

namespace sepcert {

inline constexpr double kCertificateTol = 1e-6;
inline constexpr double kClipFloor = 1e-9;

struct MapRecord {
  std::string role;  // "B" (I (x) Lambda_B), "A" (Lambda_A (x) I)
  ChoiMatrix choi;
};

/// How the decomposition was derived; enough for a third party to redo it.
struct Provenance {
  std::string mode;  // "linear", "basic-sdp", "enhanced", "corollary1"
  std::optional<ProductEnsemble> base;
  std::vector<MapRecord> maps;
  double global_scale = 1.0;  // weight renormalization applied by the builder
  double clipped = 0.0;       // most negative factor eigenvalue clipped to zero
  std::vector<std::string> notes;
};

/// Product-state decomposition of a specific target state.
struct Certificate {
  std::string target_hash;
  Dims dims;
  ProductEnsemble ensemble;
  Provenance provenance;
  double residual = 0.0;  // ||sigma - assemble(ensemble)||_F
  double tolerance = kCertificateTol;
};

class CertificateError : public Error {
 public:
  enum class Kind { ResidualTooLarge, NegativeFactor, CriterionNotMet };

  CertificateError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

struct BuildOptions {
  double cert_tol = kCertificateTol;
  double clip_floor = kClipFloor;
};

/// Terms (p_i t_i, rho_A^(i), Lambda(rho_B^(i)) / t_i), t_i = Tr Lambda(rho_B^(i)).
Certificate build_from_map(const ProductEnsemble& base, const LocalMap& map_b,
                           const BipartiteState& sigma, const BuildOptions& opts = {});

/// Terms from sum_i p_i [rho_A^(i) (x) Lambda_B(rho_B^(i)) + Lambda_A(rho_A^(i)) (x) rho_B^(i)],
/// identical terms merged.
Certificate build_from_enhanced(const ProductEnsemble& base, const LocalMap& map_a,
                                const LocalMap& map_b, const BipartiteState& sigma,
                                const BuildOptions& opts = {});

/// Explicit decomposition for states passing the eigenvalue criterion:
/// 4^d phase-vector terms and d basis terms (before zero-weight drops).
Certificate build_corollary1(const BipartiteState& sigma, const BuildOptions& opts = {});

struct VerificationReport {
  bool valid = false;
  std::vector<std::string> failures;
  double residual = 0.0;
  double min_factor_eigenvalue = 0.0;
  double weight_sum = 0.0;
};

struct VerifyTolerances {
  double residual = kCertificateTol;
  double factor_psd = kClipFloor;
  double weight_sum = 1e-9;
  double factor_trace = 1e-9;
};

/// Recomputes every certificate invariant from raw data.
VerificationReport verify_certificate(const Certificate& cert, const BipartiteState& sigma,
                                      const VerifyTolerances& tol = {});

}  // namespace sepcert
