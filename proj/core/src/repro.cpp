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

#include "sepcert/repro.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>

#include "sepcert/criteria.hpp"

namespace sepcert {

namespace {

CMatrix gaussian_matrix(Index rows, Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  CMatrix m(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) m(i, j) = Complex(g(rng), g(rng));
  }
  return m;
}

CMatrix random_hermitian(Index n, std::mt19937_64& rng) {
  const CMatrix g = gaussian_matrix(n, n, rng);
  return (g + g.adjoint()) / (2.0 * std::sqrt(static_cast<double>(n)));
}

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

AcceptanceResult timed(int id, std::string title, double budget,
                       const std::function<bool(std::ostringstream&)>& body) {
  AcceptanceResult r;
  r.id = id;
  r.title = std::move(title);
  r.budget_seconds = budget;
  std::ostringstream detail;
  detail.precision(6);
  Stopwatch sw;
  bool ok = false;
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail << "exception: " << e.what();
    ok = false;
  }
  r.seconds = sw.seconds();
  if (budget > 0.0 && r.seconds > budget) {
    detail << "; runtime " << r.seconds << " s over budget " << budget << " s";
    ok = false;
  }
  r.pass = ok;
  r.detail = detail.str();
  return r;
}

bool certificate_ok(const DetectionOutcome& out, const BipartiteState& target) {
  if (out.verdict != Verdict::Separable || !out.certificate) return false;
  return verify_certificate(*out.certificate, target).valid;
}

}  // namespace

LocalMap random_cp_map(Index d_in, Index d_out, Index n_kraus, std::mt19937_64& rng) {
  std::vector<CMatrix> kraus;
  for (Index k = 0; k < n_kraus; ++k) kraus.push_back(gaussian_matrix(d_out, d_in, rng));
  return LocalMap::from_kraus(kraus);
}

BipartiteState renormalized(const CMatrix& m, Dims dims) {
  const double tr = m.trace().real();
  if (!(tr > 0.0)) throw InvariantViolation("renormalized: trace must be positive");
  return BipartiteState::from_matrix(hermitian_part(m) / tr, dims);
}

BaseState random_faithful_base(Index d, Index n_terms, std::uint64_t seed) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    BaseState b = BaseState::from_ensemble(random_separable(d, d, n_terms, trial_seed(seed, attempt)));
    if (is_faithful(b.state).faithful) return b;
  }
  throw InvariantViolation("random_faithful_base: no faithful base after 64 attempts");
}

BipartiteState gb_ball_state(Index d, double fraction, std::mt19937_64& rng) {
  const Index n = d * d;
  CMatrix h = random_hermitian(n, rng);
  h -= (h.trace() / static_cast<double>(n)) * CMatrix::Identity(n, n);
  h /= h.norm();
  const double r = fraction * std::sqrt(gb_radius_squared(d));
  return BipartiteState::from_matrix(CMatrix::Identity(n, n) / static_cast<double>(n) + r * h,
                                     Dims{d, d});
}

PlantedLmi planted_lmi(Index n_vars, const std::vector<Index>& block_sizes, Index n_equalities,
                       double margin, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  PlantedLmi out;
  out.margin = margin;
  out.point = RVector(n_vars);
  for (Index j = 0; j < n_vars; ++j) out.point(j) = g(rng);
  for (Index k : block_sizes) {
    std::vector<CMatrix> coeffs;
    CMatrix shift = CMatrix::Zero(k, k);
    for (Index j = 0; j < n_vars; ++j) {
      coeffs.push_back(random_hermitian(k, rng));
      shift += out.point(j) * coeffs.back();
    }
    // PSD part with a zero eigenvalue, so the margin at the planted point is exact.
    const Eigen::HouseholderQR<CMatrix> qr(gaussian_matrix(k, k, rng));
    const CMatrix q = qr.householderQ();
    RVector spec(k);
    spec(0) = 0.0;
    for (Index i = 1; i < k; ++i) spec(i) = u(rng);
    const CMatrix psd = q * spec.cast<Complex>().asDiagonal() * q.adjoint();
    CMatrix constant = psd + margin * CMatrix::Identity(k, k) - shift;
    constant = hermitian_part(constant);
    out.problem.blocks.push_back(LmiBlock::from_matrices(constant, coeffs));
    out.constants.push_back(constant);
    out.coefficients.push_back(std::move(coeffs));
  }
  out.problem.n_vars = n_vars;
  out.problem.equality_matrix = RMatrix(n_equalities, n_vars);
  for (Index i = 0; i < n_equalities; ++i) {
    for (Index j = 0; j < n_vars; ++j) out.problem.equality_matrix(i, j) = g(rng);
  }
  out.problem.equality_rhs = out.problem.equality_matrix * out.point;
  return out;
}

double planted_margin(const PlantedLmi& p, const RVector& x) {
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t b = 0; b < p.constants.size(); ++b) {
    CMatrix f = p.constants[b];
    for (std::size_t j = 0; j < p.coefficients[b].size(); ++j) {
      f += x(static_cast<Index>(j)) * p.coefficients[b][j];
    }
    worst = std::min(worst, Eigen::SelfAdjointEigenSolver<CMatrix>(hermitian_part(f),
                                                                   Eigen::EigenvaluesOnly)
                                .eigenvalues()(0));
  }
  return worst;
}

AcceptanceResult accept_gb_gap(const AcceptanceOptions&) {
  return timed(1, "GB-gap reproduction", 1.0, [](std::ostringstream& os) {
    bool ok = true;
    double worst = 0.0;
    for (Index d = 2; d <= 6; ++d) {
      const double dd = static_cast<double>(d);
      const double f = gb_gap(d, 1.0 - dd / (dd + 1.0));
      const double closed = (dd - 2.0) / (dd * dd * dd - dd);
      worst = std::max(worst, std::abs(f - closed));
    }
    ok = worst <= 1e-12;
    const double f3 = gb_gap(3, 0.25);
    ok = ok && std::abs(f3 - 1.0 / 24.0) <= 1e-12;
    os << "max |f(d,1-d/(d+1)) - (d-2)/(d^3-d)| over d=2..6 = " << worst << "; f(3,1/4) = "
       << f3 << " vs 1/24";
    return ok;
  });
}

AcceptanceResult accept_isotropic_boundary(const AcceptanceOptions&) {
  return timed(2, "Isotropic boundary", 5.0, [](std::ostringstream& os) {
    bool ok = true;
    for (Index d = 2; d <= 4; ++d) {
      auto separable = [d](double lambda) {
        return corollary1_check(isotropic_state(d, lambda)).verdict == CriterionVerdict::Separable;
      };
      double lo = 0.0;
      double hi = 1.0;
      if (!separable(lo) || separable(hi)) {
        ok = false;
        os << "d=" << d << ": no verdict flip in [0,1]; ";
        continue;
      }
      while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        (separable(mid) ? lo : hi) = mid;
      }
      const double expected = 1.0 / (static_cast<double>(d) + 1.0);
      const double err = std::abs(0.5 * (lo + hi) - expected);
      ok = ok && err <= 1e-9;
      os << "d=" << d << ": flip at " << 0.5 * (lo + hi) << " (|err| " << err << "); ";
    }
    return ok;
  });
}

AcceptanceResult accept_constructive_certificate(const AcceptanceOptions&) {
  return timed(3, "Constructive certificate", 10.0, [](std::ostringstream& os) {
    struct Case {
      std::string label;
      BipartiteState state;
    };
    std::vector<Case> cases;
    cases.push_back({"I/4", isotropic_state(2, 0.0)});
    cases.push_back({"I/9", isotropic_state(3, 0.0)});
    cases.push_back({"sigma(1/4) d=3", sigma_epsilon(3, 0.25)});
    bool ok = true;
    for (const Case& c : cases) {
      const Certificate cert = build_corollary1(c.state);
      VerifyTolerances vt;
      vt.residual = 1e-8;
      const VerificationReport rep = verify_certificate(cert, c.state, vt);
      const bool this_ok = rep.valid && rep.residual <= 1e-8 && rep.min_factor_eigenvalue >= -1e-9;
      ok = ok && this_ok;
      os << c.label << ": " << cert.ensemble.size() << " terms, residual " << rep.residual
         << ", min factor eig " << rep.min_factor_eigenvalue << (this_ok ? "" : " FAILED") << "; ";
    }
    return ok;
  });
}

AcceptanceResult accept_roundtrip_detection(const AcceptanceOptions& o) {
  return timed(4, "Round-trip detection soundness", 120.0, [&o](std::ostringstream& os) {
    constexpr int kTargets = 200;
    std::mt19937_64 rng(o.seed ^ 0x4a1u);
    int linear_ok = 0;
    int sdp_ok = 0;
    int enhanced_ok = 0;
    for (int k = 0; k < kTargets; ++k) {
      const BaseState base = random_faithful_base(2, 16, o.seed + static_cast<std::uint64_t>(k));
      const LocalMap cp = random_cp_map(2, 2, 2, rng);
      const BipartiteState target = renormalized(apply_local_B(cp, base.state), Dims{2, 2});
      if (certificate_ok(detect_linear(base, target), target)) ++linear_ok;
      if (certificate_ok(detect_basic_sdp(base, target), target)) ++sdp_ok;
    }
    for (int k = 0; k < kTargets; ++k) {
      const BaseState base =
          random_faithful_base(2, 16, o.seed + 1000003u + static_cast<std::uint64_t>(k));
      const LocalMap cp_a = random_cp_map(2, 2, 2, rng);
      const LocalMap cp_b = random_cp_map(2, 2, 2, rng);
      const BipartiteState target =
          renormalized(0.5 * apply_local_sum(cp_a, cp_b, base.state), Dims{2, 2});
      if (certificate_ok(detect_enhanced(base, target), target)) ++enhanced_ok;
    }
    os << "linear " << linear_ok << "/" << kTargets << ", basic-sdp " << sdp_ok << "/" << kTargets
       << ", enhanced " << enhanced_ok << "/" << kTargets;
    return linear_ok == kTargets && sdp_ok == kTargets && enhanced_ok == kTargets;
  });
}

AcceptanceResult accept_no_false_positives(const AcceptanceOptions& o) {
  return timed(5, "No false positives", 0.0, [&o](std::ostringstream& os) {
    std::mt19937_64 rng(o.seed ^ 0x5b2u);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<BipartiteState> suite;

    for (Index d : {Index{2}, Index{3}}) {
      const Dims dims{d, d};
      const int scale = d == 2 ? 2 : 1;
      for (int k = 0; k < 60 * scale; ++k) {
        suite.push_back(BipartiteState::from_matrix(random_density_matrix(d * d, rng), dims));
      }
      for (int k = 0; k < 40 * scale; ++k) {
        suite.push_back(BipartiteState::from_matrix(random_density_matrix(d * d, 2, rng), dims));
      }
      for (int k = 0; k < 50 * scale; ++k) suite.push_back(isotropic_state(d, u(rng)));
      for (int k = 0; k < 50 * scale; ++k) {
        const ProductEnsemble e = random_separable(d, d, 1 + static_cast<Index>(u(rng) * d * d), rng());
        const double p = u(rng);
        suite.push_back(BipartiteState::from_matrix(
            p * maximally_entangled(d).matrix() + (1.0 - p) * assemble(e).matrix(), dims));
      }
      for (int k = 0; k < 50 * scale; ++k) {
        suite.push_back(assemble(random_separable(d, d, 1 + static_cast<Index>(u(rng) * d * d * 2), rng())));
      }
      for (int k = 0; k < 50 * scale; ++k) suite.push_back(gb_ball_state(d, u(rng), rng));
      for (int k = 0; k < 34 * scale; ++k) {
        const BaseState b = random_faithful_base(d, d * d + 1, rng());
        suite.push_back(renormalized(apply_local_B(random_cp_map(d, d, 1, rng), b.state), dims));
      }
    }

    int declared = 0;
    int npt = 0;
    int false_positive = 0;
    int uncertified = 0;
    double worst_ppt = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < suite.size(); ++k) {
      const BipartiteState& s = suite[k];
      const Index d = s.dims().a;
      AutoPolicy policy;
      policy.seed = o.seed + k;
      policy.n_bases = d == 2 ? 2 : 1;
      policy.enhanced = d == 2;
      policy.jobs = o.jobs;
      const DetectionOutcome out = detect_auto(s, policy);
      const double ppt = min_eigenvalue(partial_transpose(s, Subsystem::B));
      if (ppt < -1e-9) ++npt;
      if (out.verdict != Verdict::Separable) continue;
      ++declared;
      worst_ppt = std::min(worst_ppt, ppt);
      if (ppt < -1e-9) ++false_positive;
      if (!certificate_ok(out, s)) ++uncertified;
    }
    os << suite.size() << " states, " << npt << " NPT, " << declared << " declared separable, "
       << false_positive << " false positives, " << uncertified
       << " without verifying certificate, worst PPT statistic among declared " << worst_ppt;
    return suite.size() >= 1000 && false_positive == 0 && uncertified == 0;
  });
}

AcceptanceResult accept_faithfulness(const AcceptanceOptions& o) {
  return timed(6, "Faithfulness classification", 5.0, [&o](std::ostringstream& os) {
    std::mt19937_64 rng(o.seed ^ 0x6c3u);
    bool ok = true;
    for (Index d : {Index{2}, Index{3}}) {
      if (!is_faithful(maximally_entangled(d)).faithful) {
        ok = false;
        os << "psi+ d=" << d << " not faithful; ";
      }
    }
    int product_faithful = 0;
    int products = 0;
    for (Index d : {Index{2}, Index{3}}) {
      for (int k = 0; k < 100; ++k) {
        const CVector x = random_pure_state(d, rng);
        const CVector y = random_pure_state(d, rng);
        const BipartiteState s = BipartiteState::from_matrix(
            tensor_product(x * x.adjoint(), y * y.adjoint()), Dims{d, d});
        ++products;
        if (is_faithful(s).faithful) ++product_faithful;
      }
    }
    int faithful = 0;
    for (int k = 0; k < 100; ++k) {
      if (is_faithful(assemble(random_separable(2, 2, 5, o.seed + 17u * k))).faithful) ++faithful;
    }
    os << "psi+ faithful (d=2,3); " << product_faithful << "/" << products
       << " pure products faithful; " << faithful << "/100 random separable faithful";
    return ok && product_faithful == 0 && faithful >= 99;
  });
}

AcceptanceResult accept_solver_contract(const AcceptanceOptions& o) {
  return timed(7, "Solver contract", 60.0, [&o](std::ostringstream& os) {
    std::mt19937_64 rng(o.seed ^ 0x7d4u);
    std::uniform_int_distribution<Index> vars(1, 50);
    std::uniform_int_distribution<Index> nblocks(1, 3);
    std::uniform_int_distribution<Index> bsize(2, 16);
    std::uniform_real_distribution<double> logm(std::log(1e-3), 0.0);
    int ok = 0;
    double worst_ratio = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 50; ++k) {
      const Index n = vars(rng);
      std::vector<Index> sizes(static_cast<std::size_t>(nblocks(rng)));
      for (Index& s : sizes) s = bsize(rng);
      const Index neq = n / 4;
      const double m = std::exp(logm(rng));
      const PlantedLmi lmi = planted_lmi(n, sizes, neq, m, rng);
      const FeasResult r = solve_feasibility(lmi.problem);
      if (r.status != FeasStatus::Feasible) continue;
      const double margin = planted_margin(lmi, r.x);
      const double eq = (lmi.problem.equality_matrix * r.x - lmi.problem.equality_rhs).norm();
      const double eq_tol = kEqualityTol * std::max(1.0, lmi.problem.equality_rhs.norm());
      worst_ratio = std::min(worst_ratio, margin / m);
      if (margin >= 0.9 * m && eq <= eq_tol) ++ok;
    }
    os << ok << "/50 planted families reach t >= 0.9 m with independent re-evaluation; worst t/m "
       << worst_ratio;
    return ok == 50;
  });
}

AcceptanceResult accept_coverage_report(const AcceptanceOptions& o) {
  AcceptanceResult r = timed(8, "Statistical coverage report", 0.0, [&o](std::ostringstream& os) {
    std::mt19937_64 rng(o.seed ^ 0x8e5u);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int separable = 0;
    int analytical = 0;
    int certified = 0;
    for (int k = 0; k < 50; ++k) {
      const BipartiteState s = gb_ball_state(2, 0.999 * u(rng), rng);
      AutoPolicy policy;
      policy.n_bases = 32;
      policy.seed = o.seed + 31u * k;
      policy.jobs = o.jobs;
      const DetectionOutcome out = detect_auto(s, policy);
      if (out.verdict != Verdict::Separable) continue;
      ++separable;
      if (out.mode == DetectionMode::Analytical) ++analytical;
      if (certificate_ok(out, s)) ++certified;
    }
    os << "detection rate " << separable << "/50 (" << analytical << " via eigenvalue criterion, "
       << separable - analytical << " via random bases); " << certified
       << " carry verifying certificates";
    return certified == separable;
  });
  r.informational = true;
  return r;
}

std::vector<AcceptanceResult> run_acceptance(const AcceptanceOptions& o) {
  return {accept_gb_gap(o),           accept_isotropic_boundary(o), accept_constructive_certificate(o),
          accept_roundtrip_detection(o), accept_no_false_positives(o), accept_faithfulness(o),
          accept_solver_contract(o),  accept_coverage_report(o)};
}

std::string format_acceptance(const AcceptanceResult& r) {
  std::ostringstream os;
  os.precision(3);
  os << "[ACCEPT] #" << r.id << " " << r.title << ": " << (r.pass ? "PASS" : "FAIL")
     << (r.informational ? " (informational)" : "") << " (" << r.detail << "; " << r.seconds
     << " s";
  if (r.budget_seconds > 0.0) os << " of " << r.budget_seconds << " s budget";
  os << ")";
  return os.str();
}

}  // namespace sepcert
