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

#include "sepcert/states.hpp"

#include <cmath>
#include <sstream>

#include "sepcert/maps.hpp"

namespace sepcert {

namespace {

std::string factor_problem(const CMatrix& f, Index dim, const EnsembleTolerances& tol) {
  std::ostringstream os;
  if (f.rows() != dim || f.cols() != dim) {
    os << "factor is " << f.rows() << "x" << f.cols() << ", expected " << dim << "x" << dim;
    return os.str();
  }
  if (!is_hermitian(f)) {
    os << "factor not Hermitian (defect " << hermiticity_defect(f) << ")";
    return os.str();
  }
  const double lmin = min_eigenvalue(f);
  if (lmin < -tol.psd) {
    os << "factor not PSD (min eigenvalue " << lmin << ")";
    return os.str();
  }
  const double tr = f.trace().real();
  if (std::abs(tr - 1.0) > tol.trace) {
    os << "factor trace " << tr << " != 1";
    return os.str();
  }
  return {};
}

CVector complex_gaussian(Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CVector v(n);
  for (Index i = 0; i < n; ++i) {
    const double re = normal(rng);
    const double im = normal(rng);
    v(i) = Complex(re, im);
  }
  return v;
}

}  // namespace

std::vector<std::string> ensemble_violations(const ProductEnsemble& e,
                                             const EnsembleTolerances& tol) {
  std::vector<std::string> out;
  if (e.dims.a < 1 || e.dims.b < 1) out.push_back("ensemble dimensions must be >= 1");
  if (e.terms.empty()) out.push_back("ensemble has no terms");
  double sum = 0.0;
  for (std::size_t i = 0; i < e.terms.size(); ++i) {
    const ProductTerm& t = e.terms[i];
    if (!(t.weight > 0.0)) {
      out.push_back("term " + std::to_string(i) + ": weight must be positive");
    }
    sum += t.weight;
    if (auto p = factor_problem(t.rho_a, e.dims.a, tol); !p.empty()) {
      out.push_back("term " + std::to_string(i) + " rho_A: " + p);
    }
    if (auto p = factor_problem(t.rho_b, e.dims.b, tol); !p.empty()) {
      out.push_back("term " + std::to_string(i) + " rho_B: " + p);
    }
  }
  if (!e.terms.empty() && std::abs(sum - 1.0) > tol.weight_sum) {
    std::ostringstream os;
    os << "weights sum to " << sum << ", expected 1";
    out.push_back(os.str());
  }
  return out;
}

void validate_ensemble(const ProductEnsemble& e, const EnsembleTolerances& tol) {
  const auto problems = ensemble_violations(e, tol);
  if (!problems.empty()) throw InvariantViolation("invalid product ensemble: " + problems.front());
}

BipartiteState assemble(const ProductEnsemble& e) {
  validate_ensemble(e);
  CMatrix m = CMatrix::Zero(e.dims.total(), e.dims.total());
  for (const ProductTerm& t : e.terms) m += t.weight * tensor_product(t.rho_a, t.rho_b);
  return BipartiteState::from_matrix(m, e.dims);
}

PhaseVector::PhaseVector(std::vector<int> exponents) : exponents_(std::move(exponents)) {
  for (int k : exponents_) {
    if (k < 0 || k > 3) throw InvariantViolation("PhaseVector: exponent must be in {0,1,2,3}");
  }
}

Complex PhaseVector::operator[](Index j) const {
  static const Complex roots[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  return roots[exponents_.at(static_cast<std::size_t>(j))];
}

CVector PhaseVector::state() const {
  CVector v(size());
  const double norm = 1.0 / std::sqrt(static_cast<double>(size()));
  for (Index j = 0; j < size(); ++j) v(j) = norm * (*this)[j];
  return v;
}

PhaseVector PhaseVector::conjugate() const {
  std::vector<int> e(exponents_.size());
  for (std::size_t j = 0; j < e.size(); ++j) e[j] = (4 - exponents_[j]) % 4;
  return PhaseVector(std::move(e));
}

std::vector<PhaseVector> PhaseVector::enumerate(Index d) {
  if (d < 1) throw DimensionMismatch("PhaseVector::enumerate: d must be >= 1");
  std::size_t count = 1;
  for (Index i = 0; i < d; ++i) count *= 4;
  std::vector<PhaseVector> out;
  out.reserve(count);
  std::vector<int> e(static_cast<std::size_t>(d), 0);
  for (std::size_t n = 0; n < count; ++n) {
    std::size_t rest = n;
    for (Index j = d - 1; j >= 0; --j) {
      e[static_cast<std::size_t>(j)] = static_cast<int>(rest % 4);
      rest /= 4;
    }
    out.emplace_back(e);
  }
  return out;
}

BipartiteState maximally_entangled(Index d) {
  if (d < 2) throw DimensionMismatch("maximally_entangled: d must be >= 2");
  CVector psi = CVector::Zero(d * d);
  for (Index i = 0; i < d; ++i) psi(i * d + i) = 1.0 / std::sqrt(static_cast<double>(d));
  return BipartiteState::from_matrix(psi * psi.adjoint(), Dims{d, d});
}

BipartiteState isotropic_state(Index d, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw InvariantViolation("isotropic_state: lambda must lie in [0, 1]");
  }
  if (d < 2) throw DimensionMismatch("isotropic_state: d must be >= 2");
  const double dd = static_cast<double>(d * d);
  CMatrix m = ((1.0 - lambda) / dd) * CMatrix::Identity(d * d, d * d);
  m += lambda * maximally_entangled(d).matrix();
  return BipartiteState::from_matrix(m, Dims{d, d});
}

ProductEnsemble isotropic_base_ensemble(Index d) {
  if (d < 2) throw DimensionMismatch("isotropic_base_ensemble: d must be >= 2");
  if (d > kMaxPhaseEnumerationDim) {
    throw DimensionMismatch("isotropic_base_ensemble: d too large for 4^d phase enumeration");
  }
  const double dd = static_cast<double>(d);
  const auto phases = PhaseVector::enumerate(d);
  const double phase_weight = dd / ((dd + 1.0) * static_cast<double>(phases.size()));
  const double basis_weight = 1.0 / ((dd + 1.0) * dd);

  ProductEnsemble e{Dims{d, d}, {}};
  e.terms.reserve(phases.size() + static_cast<std::size_t>(d));
  for (const PhaseVector& z : phases) {
    const CVector phi = z.state();
    const CVector phi_conj = z.conjugate().state();
    e.terms.push_back({phase_weight, phi * phi.adjoint(), phi_conj * phi_conj.adjoint()});
  }
  for (Index j = 0; j < d; ++j) {
    CMatrix p = CMatrix::Zero(d, d);
    p(j, j) = 1.0;
    e.terms.push_back({basis_weight, p, p});
  }
  return e;
}

CMatrix random_density_matrix(Index d, Index rank, std::mt19937_64& rng) {
  CMatrix a(d, rank);
  for (Index c = 0; c < rank; ++c) a.col(c) = complex_gaussian(d, rng);
  CMatrix rho = a * a.adjoint();
  rho /= rho.trace().real();
  return hermitian_part(rho);
}

CMatrix random_density_matrix(Index d, std::mt19937_64& rng) {
  return random_density_matrix(d, d, rng);
}

CVector random_pure_state(Index d, std::mt19937_64& rng) {
  CVector v = complex_gaussian(d, rng);
  return v / v.norm();
}

ProductEnsemble random_separable(Index da, Index db, Index n_terms, std::uint64_t seed) {
  if (da < 1 || db < 1) throw DimensionMismatch("random_separable: dimensions must be >= 1");
  if (n_terms < 1 || n_terms > da * da * db * db + 1) {
    throw InvariantViolation("random_separable: n_terms must lie in [1, dA^2 dB^2 + 1]");
  }
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> w(static_cast<std::size_t>(n_terms));
  double total = 0.0;
  for (double& x : w) {
    x = expo(rng);
    total += x;
  }
  ProductEnsemble e{Dims{da, db}, {}};
  e.terms.reserve(w.size());
  for (double x : w) {
    CMatrix ra = random_density_matrix(da, rng);
    CMatrix rb = random_density_matrix(db, rng);
    e.terms.push_back({x / total, std::move(ra), std::move(rb)});
  }
  return e;
}

CMatrix check_operator(const BipartiteState& rho0) {
  const Dims dims = rho0.dims();
  if (dims.a != dims.b) throw DimensionMismatch("check_operator: requires d_A == d_B");
  const CMatrix e = swap_operator(dims.a);
  return partial_transpose(e * rho0.matrix(), dims, Subsystem::B) * e;
}

FaithfulnessReport is_faithful(const BipartiteState& rho0, double tol_sigma) {
  const Dims dims = rho0.dims();
  double smin = 0.0;
  if (dims.a == dims.b) {
    smin = smallest_singular_value(check_operator(rho0));
  } else if (dims.a > dims.b) {
    const LocalMap lambda0 = map_of_choi(ChoiMatrix{dims.a, dims.b, rho0.matrix()});
    Eigen::JacobiSVD<CMatrix> svd(lambda0.transfer());
    smin = svd.singularValues()(dims.b * dims.b - 1);
  }
  return FaithfulnessReport{smin > tol_sigma, smin};
}

namespace {

bool same_factor(const CMatrix& x, const CMatrix& y, double tol) {
  return x.rows() == y.rows() && (x - y).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace

ProductEnsemble canonicalize(const ProductEnsemble& e, double merge_tol) {
  ProductEnsemble out{e.dims, {}};
  for (const ProductTerm& t : e.terms) {
    if (!(t.weight > 0.0)) continue;
    bool merged = false;
    for (ProductTerm& u : out.terms) {
      if (same_factor(u.rho_a, t.rho_a, merge_tol) && same_factor(u.rho_b, t.rho_b, merge_tol)) {
        u.weight += t.weight;
        merged = true;
        break;
      }
    }
    if (!merged) out.terms.push_back(t);
  }

  // Caratheodory: any D + 2 points in R^D with an affine dependency allow one
  // term to be removed while keeping the convex combination fixed.
  const Index dim = e.dims.total() * e.dims.total();
  const std::size_t bound = static_cast<std::size_t>(dim) + 1;
  while (out.terms.size() > bound) {
    const Index n = dim + 2;
    RMatrix m(dim + 1, n);
    for (Index i = 0; i < n; ++i) {
      const ProductTerm& t = out.terms[static_cast<std::size_t>(i)];
      m.col(i).head(dim) = hermitian_coordinates(tensor_product(t.rho_a, t.rho_b));
      m(dim, i) = 1.0;
    }
    Eigen::JacobiSVD<RMatrix> svd(m, Eigen::ComputeFullV);
    const RVector c = svd.matrixV().col(n - 1);
    double alpha = std::numeric_limits<double>::infinity();
    Index drop = -1;
    for (Index i = 0; i < n; ++i) {
      if (c(i) > 0.0) {
        const double ratio = out.terms[static_cast<std::size_t>(i)].weight / c(i);
        if (ratio < alpha) {
          alpha = ratio;
          drop = i;
        }
      }
    }
    for (Index i = 0; i < n; ++i) out.terms[static_cast<std::size_t>(i)].weight -= alpha * c(i);
    out.terms.erase(out.terms.begin() + drop);
    std::erase_if(out.terms, [](const ProductTerm& t) { return !(t.weight > 0.0); });
  }

  double total = 0.0;
  for (const ProductTerm& t : out.terms) total += t.weight;
  for (ProductTerm& t : out.terms) t.weight /= total;
  return out;
}

}  // namespace sepcert
