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

#include "sepcert/criteria.hpp"

#include <cmath>
#include <sstream>

#include "sepcert/states.hpp"

namespace sepcert {

std::string to_string(CriterionVerdict v) {
  switch (v) {
    case CriterionVerdict::Separable:
      return "Separable";
    case CriterionVerdict::Entangled:
      return "Entangled";
    case CriterionVerdict::Inconclusive:
      return "Inconclusive";
  }
  return "?";
}

namespace {

Index equal_local_dim(const BipartiteState& s, const char* what) {
  if (s.dims().a != s.dims().b) {
    throw DimensionMismatch(std::string(what) + ": requires d_A == d_B");
  }
  return s.dims().a;
}

}  // namespace

CMatrix tilde_sigma(const BipartiteState& sigma) {
  const Index d = equal_local_dim(sigma, "tilde_sigma");
  const CMatrix sigma_b = partial_trace(sigma, Subsystem::A);
  const double lmin = min_eigenvalue(sigma_b);
  if (lmin <= kMarginalFloor) {
    std::ostringstream os;
    os << "reduced state sigma_B is singular (min eigenvalue " << lmin << ")";
    throw SingularMarginal(os.str());
  }
  const CMatrix inv_sqrt = psd_power(sigma_b, -0.5);
  const CMatrix left = tensor_product(CMatrix::Identity(d, d), inv_sqrt);
  return hermitian_part(left * sigma.matrix() * left / static_cast<double>(d));
}

CriterionReport corollary1_check(const BipartiteState& sigma) {
  const Index d = equal_local_dim(sigma, "corollary1_check");
  const double dd = static_cast<double>(d);
  CriterionReport r{"eig", CriterionVerdict::Inconclusive, 0.0, 1.0 / (dd * (dd + 1.0)), {}};
  CMatrix st;
  try {
    st = tilde_sigma(sigma);
  } catch (const SingularMarginal& e) {
    r.statistic = std::nan("");
    r.note = e.what();
    return r;
  }
  r.statistic = min_eigenvalue(st);
  if (r.statistic >= r.threshold - kCriterionSlack) r.verdict = CriterionVerdict::Separable;
  return r;
}

double gb_radius_squared(Index d) {
  const double dd = static_cast<double>(d);
  return 1.0 / (dd * dd * (dd * dd - 1.0));
}

CriterionReport gurvits_barnum_check(const BipartiteState& sigma) {
  const Index d = equal_local_dim(sigma, "gurvits_barnum_check");
  const double n = static_cast<double>(d * d);
  const CMatrix diff = sigma.matrix() - CMatrix::Identity(d * d, d * d) / n;
  CriterionReport r{"gb", CriterionVerdict::Inconclusive, diff.squaredNorm(), gb_radius_squared(d),
                    {}};
  if (r.statistic <= r.threshold + kCriterionSlack) r.verdict = CriterionVerdict::Separable;
  return r;
}

BipartiteState sigma_epsilon(Index d, double eps) {
  if (d < 2) throw DimensionMismatch("sigma_epsilon: d must be >= 2");
  const double dd = static_cast<double>(d);
  const double eps_max = 1.0 - dd / (dd + 1.0);
  if (!(eps >= 0.0 && eps <= eps_max + 1e-15)) {
    std::ostringstream os;
    os << "sigma_epsilon: eps must lie in [0, " << eps_max << "]";
    throw InvariantViolation(os.str());
  }
  const double base = 1.0 / (dd * (dd + 1.0));
  const double delta = std::max(0.0, (1.0 - eps - dd / (dd + 1.0)) / (dd * dd - 1.0));
  const double lambda = base + delta;
  const double top = eps + base;
  // lambda on the whole space, plus (top - lambda) on |psi+>.
  CMatrix m = lambda * CMatrix::Identity(d * d, d * d);
  m += (top - lambda) * maximally_entangled(d).matrix();
  return BipartiteState::from_matrix(m, Dims{d, d});
}

double gb_gap(Index d, double eps) {
  const BipartiteState s = sigma_epsilon(d, eps);
  const double n = static_cast<double>(d * d);
  return (s.matrix() - CMatrix::Identity(d * d, d * d) / n).squaredNorm() - gb_radius_squared(d);
}

CriterionReport ppt_check(const BipartiteState& sigma) {
  const double stat = min_eigenvalue(partial_transpose(sigma, Subsystem::B));
  CriterionReport r{"ppt", CriterionVerdict::Inconclusive, stat, -kPsdTol, {}};
  if (stat < -kPsdTol) {
    r.verdict = CriterionVerdict::Entangled;
  } else if (sigma.dims().total() <= 6) {
    r.verdict = CriterionVerdict::Separable;
    r.note = "PPT is sufficient for dA*dB <= 6";
  } else {
    r.note = "PPT is only necessary for dA*dB > 6";
  }
  return r;
}

}  // namespace sepcert
