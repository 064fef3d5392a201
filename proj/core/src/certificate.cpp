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

#include "sepcert/certificate.hpp"

#include <cmath>
#include <sstream>

#include "sepcert/criteria.hpp"

namespace sepcert {

namespace {

struct RawTerm {
  double weight;
  CMatrix a;
  CMatrix b;
};

constexpr double kZeroTrace = 1e-12;

// Clips eigenvalues in [-floor, 0) to zero. Returns the most negative
// eigenvalue seen (0 when none).
double clip_factor(CMatrix& f, double floor) {
  const Spectrum sp = eigh(f);
  const double lmin = sp.values(0);
  if (lmin < -floor) {
    std::ostringstream os;
    os << "mapped factor has eigenvalue " << lmin << " below the clip floor " << -floor;
    throw CertificateError(CertificateError::Kind::NegativeFactor, os.str());
  }
  if (lmin < 0.0) {
    f = sp.vectors * sp.values.cwiseMax(0.0).asDiagonal() * sp.vectors.adjoint();
    return lmin;
  }
  f = hermitian_part(f);
  return 0.0;
}

Certificate finish(std::vector<RawTerm> raw, const BipartiteState& sigma, Provenance prov,
                   const BuildOptions& opts, bool merge) {
  Certificate cert;
  cert.dims = sigma.dims();
  cert.target_hash = content_digest(sigma.matrix(), sigma.dims());
  cert.tolerance = opts.cert_tol;
  cert.ensemble.dims = sigma.dims();

  double worst = 0.0;
  double total = 0.0;
  for (RawTerm& t : raw) {
    worst = std::min(worst, clip_factor(t.a, opts.clip_floor));
    worst = std::min(worst, clip_factor(t.b, opts.clip_floor));
    const double ta = t.a.trace().real();
    const double tb = t.b.trace().real();
    const double w = t.weight * ta * tb;
    if (ta <= kZeroTrace || tb <= kZeroTrace || !(w > 0.0)) continue;
    ProductTerm term{w, t.a / ta, t.b / tb};
    bool merged = false;
    if (merge) {
      for (ProductTerm& u : cert.ensemble.terms) {
        if ((u.rho_a - term.rho_a).cwiseAbs().maxCoeff() <= 1e-12 &&
            (u.rho_b - term.rho_b).cwiseAbs().maxCoeff() <= 1e-12) {
          u.weight += term.weight;
          merged = true;
          break;
        }
      }
    }
    if (!merged) cert.ensemble.terms.push_back(std::move(term));
    total += w;
  }
  if (cert.ensemble.terms.empty() || !(total > 0.0)) {
    throw CertificateError(CertificateError::Kind::ResidualTooLarge,
                           "map sends every ensemble member to zero");
  }
  for (ProductTerm& t : cert.ensemble.terms) t.weight /= total;
  prov.global_scale = 1.0 / total;
  prov.clipped = worst;
  cert.provenance = std::move(prov);

  CMatrix sum = CMatrix::Zero(sigma.dims().total(), sigma.dims().total());
  for (const ProductTerm& t : cert.ensemble.terms) sum += t.weight * tensor_product(t.rho_a, t.rho_b);
  cert.residual = (sigma.matrix() - sum).norm();
  if (!(cert.residual <= opts.cert_tol)) {
    std::ostringstream os;
    os << "reassembly residual " << cert.residual << " exceeds " << opts.cert_tol;
    throw CertificateError(CertificateError::Kind::ResidualTooLarge, os.str());
  }
  return cert;
}

}  // namespace

Certificate build_from_map(const ProductEnsemble& base, const LocalMap& map_b,
                           const BipartiteState& sigma, const BuildOptions& opts) {
  if (map_b.d_in() != base.dims.b || sigma.dims() != Dims{base.dims.a, map_b.d_out()}) {
    throw DimensionMismatch("build_from_map: base, map and target dimensions do not line up");
  }
  std::vector<RawTerm> raw;
  raw.reserve(base.terms.size());
  for (const ProductTerm& t : base.terms) raw.push_back({t.weight, t.rho_a, sepcert::apply(map_b, t.rho_b)});
  Provenance prov;
  prov.mode = "map";
  prov.base = base;
  prov.maps.push_back({"B", choi_of_map(map_b)});
  return finish(std::move(raw), sigma, std::move(prov), opts, false);
}

Certificate build_from_enhanced(const ProductEnsemble& base, const LocalMap& map_a,
                                const LocalMap& map_b, const BipartiteState& sigma,
                                const BuildOptions& opts) {
  if (map_a.d_in() != base.dims.a || map_a.d_out() != base.dims.a ||
      map_b.d_in() != base.dims.b || map_b.d_out() != base.dims.b || sigma.dims() != base.dims) {
    throw DimensionMismatch("build_from_enhanced: maps must be endomorphisms of the base factors");
  }
  std::vector<RawTerm> raw;
  raw.reserve(2 * base.terms.size());
  for (const ProductTerm& t : base.terms) {
    raw.push_back({t.weight, t.rho_a, sepcert::apply(map_b, t.rho_b)});
    raw.push_back({t.weight, sepcert::apply(map_a, t.rho_a), t.rho_b});
  }
  Provenance prov;
  prov.mode = "enhanced";
  prov.base = base;
  prov.maps.push_back({"A", choi_of_map(map_a)});
  prov.maps.push_back({"B", choi_of_map(map_b)});
  return finish(std::move(raw), sigma, std::move(prov), opts, true);
}

Certificate build_corollary1(const BipartiteState& sigma, const BuildOptions& opts) {
  const CriterionReport check = corollary1_check(sigma);
  if (check.verdict != CriterionVerdict::Separable) {
    std::ostringstream os;
    os << "eigenvalue criterion not met (statistic " << check.statistic << " < threshold "
       << check.threshold << ")";
    throw CertificateError(CertificateError::Kind::CriterionNotMet, os.str());
  }
  const Index d = sigma.dims().a;
  const double dd = static_cast<double>(d);
  const CMatrix sigma_b = partial_trace(sigma, Subsystem::A);
  const CMatrix root_b = psd_power(sigma_b, 0.5);
  const CMatrix z = tilde_sigma(sigma) - CMatrix::Identity(d * d, d * d) / (dd * (dd + 1.0));
  // (I (x) Lambda)(rho(1/(d+1))) = tilde_sigma with Lambda(1) = 1.
  const LocalMap lambda = map_of_choi(ChoiMatrix{d, d, (dd + 1.0) * z});
  // sigma = d (1 (x) sigma_B^{1/2}) tilde_sigma (1 (x) sigma_B^{1/2}).
  const LocalMap composite = compose(LocalMap::sandwich(root_b, root_b), lambda) * dd;

  const ProductEnsemble base = isotropic_base_ensemble(d);
  std::vector<RawTerm> raw;
  raw.reserve(base.terms.size());
  for (const ProductTerm& t : base.terms) raw.push_back({t.weight, t.rho_a, sepcert::apply(composite, t.rho_b)});
  Provenance prov;
  prov.mode = "corollary1";
  prov.base = base;
  prov.maps.push_back({"B", choi_of_map(composite)});
  std::ostringstream note;
  note << "eigenvalue criterion statistic " << check.statistic << " >= " << check.threshold;
  prov.notes.push_back(note.str());
  return finish(std::move(raw), sigma, std::move(prov), opts, false);
}

VerificationReport verify_certificate(const Certificate& cert, const BipartiteState& sigma,
                                      const VerifyTolerances& tol) {
  VerificationReport rep;
  auto fail = [&rep](std::string s) { rep.failures.push_back(std::move(s)); };
  const Dims dims = sigma.dims();

  if (cert.dims != dims || cert.ensemble.dims != dims) fail("dimensions differ from the target");
  if (cert.target_hash != content_digest(sigma.matrix(), dims)) fail("target hash mismatch");
  if (cert.ensemble.terms.empty()) fail("ensemble is empty");

  rep.min_factor_eigenvalue = std::numeric_limits<double>::infinity();
  CMatrix sum = CMatrix::Zero(dims.total(), dims.total());
  bool shapes_ok = true;
  for (std::size_t i = 0; i < cert.ensemble.terms.size(); ++i) {
    const ProductTerm& t = cert.ensemble.terms[i];
    const std::string tag = "term " + std::to_string(i);
    if (!(t.weight > 0.0) || !std::isfinite(t.weight)) fail(tag + ": weight not positive");
    rep.weight_sum += t.weight;
    const std::pair<const CMatrix*, Index> factors[2] = {{&t.rho_a, dims.a}, {&t.rho_b, dims.b}};
    for (const auto& [f, dim] : factors) {
      if (f->rows() != dim || f->cols() != dim) {
        fail(tag + ": factor has wrong shape");
        shapes_ok = false;
        continue;
      }
      if (!f->allFinite()) {
        fail(tag + ": factor has non-finite entries");
        shapes_ok = false;
        continue;
      }
      if (hermiticity_defect(*f) > kHermitianTol) {
        fail(tag + ": factor not Hermitian");
        continue;
      }
      const double lmin = Eigen::SelfAdjointEigenSolver<CMatrix>(hermitian_part(*f),
                                                                 Eigen::EigenvaluesOnly)
                              .eigenvalues()(0);
      rep.min_factor_eigenvalue = std::min(rep.min_factor_eigenvalue, lmin);
      if (lmin < -tol.factor_psd) fail(tag + ": factor not PSD");
      if (std::abs(f->trace().real() - 1.0) > tol.factor_trace ||
          std::abs(f->trace().imag()) > tol.factor_trace) {
        fail(tag + ": factor trace != 1");
      }
    }
    if (shapes_ok && t.rho_a.rows() == dims.a && t.rho_b.rows() == dims.b) {
      sum += t.weight * tensor_product(t.rho_a, t.rho_b);
    }
  }
  if (std::abs(rep.weight_sum - 1.0) > tol.weight_sum) fail("weights do not sum to 1");
  rep.residual = shapes_ok ? (sigma.matrix() - sum).norm() : std::numeric_limits<double>::infinity();
  if (!(rep.residual <= tol.residual)) {
    std::ostringstream os;
    os << "reassembly residual " << rep.residual << " exceeds " << tol.residual;
    fail(os.str());
  }
  rep.valid = rep.failures.empty();
  return rep;
}

}  // namespace sepcert
