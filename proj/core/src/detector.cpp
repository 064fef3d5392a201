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

#include "sepcert/detector.hpp"

#include <algorithm>
#include <exception>
#include <functional>
#include <random>
#include <sstream>
#include <thread>

#include "sepcert/criteria.hpp"

namespace sepcert {

BaseState BaseState::from_ensemble(const ProductEnsemble& e) { return {e, assemble(e)}; }

std::string to_string(DetectionMode m) {
  switch (m) {
    case DetectionMode::Analytical: return "analytical";
    case DetectionMode::Linear: return "linear";
    case DetectionMode::BasicSdp: return "basic-sdp";
    case DetectionMode::Enhanced: return "enhanced";
  }
  return "unknown";
}

std::string to_string(Verdict v) { return v == Verdict::Separable ? "separable" : "inconclusive"; }

namespace {

std::vector<LocalMap> basis_maps(Index d_in, Index d_out) {
  const Index dim = d_in * d_out;
  std::vector<LocalMap> maps;
  maps.reserve(static_cast<std::size_t>(dim * dim));
  for (Index k = 0; k < dim * dim; ++k) {
    maps.push_back(map_of_choi(ChoiMatrix{d_in, d_out, hermitian_basis_element(dim, k)}));
  }
  return maps;
}

// Block family k -> map_k(rho) over the given basis maps, constant zero.
LmiBlock image_block(const std::vector<LocalMap>& basis, const CMatrix& rho, Index offset,
                     Index n_vars) {
  const Index out = basis.front().d_out();
  LmiBlock blk;
  blk.size = out;
  blk.constant = CMatrix::Zero(out, out);
  blk.coefficients = CMatrix::Zero(out * out, n_vars);
  for (std::size_t j = 0; j < basis.size(); ++j) {
    const CMatrix img = sepcert::apply(basis[j], rho);
    blk.coefficients.col(offset + static_cast<Index>(j)) =
        Eigen::Map<const CVector>(img.data(), out * out);
  }
  return blk;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

// Wraps a candidate certificate: Separable only if the independent verifier
// accepts it.
void finalize(DetectionOutcome& out, const BipartiteState& target,
              const std::function<Certificate()>& build, const DetectorOptions& opts) {
  try {
    Certificate cert = build();
    VerifyTolerances vt;
    vt.residual = opts.cert_tol;
    const VerificationReport rep = verify_certificate(cert, target, vt);
    if (!rep.valid) {
      out.diagnostics.notes.push_back("certificate rejected by verifier: " + rep.failures.front());
      return;
    }
    out.verdict = Verdict::Separable;
    out.certificate = std::move(cert);
  } catch (const CertificateError& e) {
    out.diagnostics.notes.push_back(std::string("certificate construction failed: ") + e.what());
  }
}

SolverOptions solver_options(const DetectorOptions& opts) {
  SolverOptions so;
  so.eps_feas = opts.eps_feas;
  so.eps_eq = opts.eps_eq;
  so.max_iter = opts.max_iter;
  so.target_margin = opts.target_margin;
  return so;
}

void require_compatible(const BaseState& base, const BipartiteState& target) {
  if (base.state.dims().a != target.dims().a) {
    throw DimensionMismatch("base and target must share the A factor dimension");
  }
}

}  // namespace

LinearSystem assemble_linear_system(const BipartiteState& base, const BipartiteState& target) {
  if (base.dims().a != target.dims().a) {
    throw DimensionMismatch("base and target must share the A factor dimension");
  }
  LinearSystem sys;
  sys.d_in = base.dims().b;
  sys.d_out = target.dims().b;
  const std::vector<LocalMap> basis = basis_maps(sys.d_in, sys.d_out);
  const Index rows = target.dims().total() * target.dims().total();
  sys.matrix = RMatrix::Zero(rows, static_cast<Index>(basis.size()));
  for (std::size_t j = 0; j < basis.size(); ++j) {
    sys.matrix.col(static_cast<Index>(j)) = hermitian_coordinates(apply_local_B(basis[j], base));
  }
  sys.rhs = hermitian_coordinates(target.matrix());
  return sys;
}

LinearSystem assemble_enhanced_system(const BipartiteState& base, const BipartiteState& target) {
  if (base.dims() != target.dims()) {
    throw DimensionMismatch("enhanced system needs base and target of equal dimensions");
  }
  const Dims dims = base.dims();
  const std::vector<LocalMap> basis_a = basis_maps(dims.a, dims.a);
  const std::vector<LocalMap> basis_b = basis_maps(dims.b, dims.b);
  const Index na = static_cast<Index>(basis_a.size());
  const Index nb = static_cast<Index>(basis_b.size());
  LinearSystem sys;
  sys.d_in = dims.b;
  sys.d_out = dims.b;
  sys.matrix = RMatrix::Zero(dims.total() * dims.total(), na + nb);
  for (Index j = 0; j < na; ++j) {
    sys.matrix.col(j) = hermitian_coordinates(apply_local_A(basis_a[j], base));
  }
  for (Index j = 0; j < nb; ++j) {
    sys.matrix.col(na + j) = hermitian_coordinates(apply_local_B(basis_b[j], base));
  }
  sys.rhs = hermitian_coordinates(target.matrix());
  return sys;
}

LocalMap map_from_parameters(const RVector& y, Index d_in, Index d_out) {
  return map_of_choi(ChoiMatrix{d_in, d_out, hermitian_from_coordinates(y, d_in * d_out)});
}

DetectionOutcome detect_linear(const BaseState& base, const BipartiteState& target,
                               const DetectorOptions& opts) {
  require_compatible(base, target);
  const FaithfulnessReport faith = is_faithful(base.state, opts.faithful_tol);
  if (!faith.faithful) {
    DetectionOutcome out = detect_basic_sdp(base, target, opts);
    out.diagnostics.notes.insert(out.diagnostics.notes.begin(),
                                 "base not faithful (sigma_min " + fmt(faith.sigma_min) +
                                     "): fallback from linear to basic-sdp");
    return out;
  }
  DetectionOutcome out;
  out.mode = DetectionMode::Linear;
  out.base_used = base;

  const LinearSystem sys = assemble_linear_system(base.state, target);
  const RVector y = sys.matrix.colPivHouseholderQr().solve(sys.rhs);
  const double res = (sys.matrix * y - sys.rhs).norm();
  out.diagnostics.equality_residual = res;
  if (res > opts.eps_eq * std::max(1.0, sys.rhs.norm())) {
    out.diagnostics.notes.push_back("linear system inconsistent (residual " + fmt(res) + ")");
    return out;
  }
  const LocalMap map = map_from_parameters(y, sys.d_in, sys.d_out);
  double margin = std::numeric_limits<double>::infinity();
  for (const ProductTerm& t : base.ensemble.terms) {
    margin = std::min(margin, min_eigenvalue(hermitian_part(sepcert::apply(map, t.rho_b))));
  }
  out.diagnostics.margin = margin;
  if (margin < -opts.positivity_floor) {
    out.diagnostics.notes.push_back("unique map is not positive on the base ensemble (min eig " +
                                    fmt(margin) + ")");
    return out;
  }
  BuildOptions bo;
  bo.cert_tol = opts.cert_tol;
  bo.clip_floor = opts.positivity_floor;
  finalize(out, target, [&] {
    Certificate c = build_from_map(base.ensemble, map, target, bo);
    c.provenance.mode = "linear";
    return c;
  }, opts);
  return out;
}

DetectionOutcome detect_basic_sdp(const BaseState& base, const BipartiteState& target,
                                  const DetectorOptions& opts) {
  require_compatible(base, target);
  DetectionOutcome out;
  out.mode = DetectionMode::BasicSdp;
  out.base_used = base;

  const LinearSystem sys = assemble_linear_system(base.state, target);
  const std::vector<LocalMap> basis = basis_maps(sys.d_in, sys.d_out);
  LmiProblem p;
  p.n_vars = sys.matrix.cols();
  p.equality_matrix = sys.matrix;
  p.equality_rhs = sys.rhs;
  for (const ProductTerm& t : base.ensemble.terms) {
    p.blocks.push_back(image_block(basis, t.rho_b, 0, p.n_vars));
  }
  const FeasResult r = solve_feasibility(p, solver_options(opts));
  out.diagnostics.margin = r.margin;
  out.diagnostics.scale = r.scale;
  out.diagnostics.equality_residual = r.equality_residual;
  out.diagnostics.iterations = r.iterations;
  if (r.status != FeasStatus::Feasible) {
    out.diagnostics.notes.push_back("solver: " + to_string(r.status) + " (margin " +
                                    fmt(r.margin) + ")");
    return out;
  }
  const LocalMap map = map_from_parameters(r.x, sys.d_in, sys.d_out);
  BuildOptions bo;
  bo.cert_tol = opts.cert_tol;
  finalize(out, target, [&] {
    Certificate c = build_from_map(base.ensemble, map, target, bo);
    c.provenance.mode = "basic-sdp";
    return c;
  }, opts);
  return out;
}

DetectionOutcome detect_enhanced(const BaseState& base, const BipartiteState& target,
                                 const DetectorOptions& opts) {
  require_compatible(base, target);
  const Dims dims = target.dims();
  if (dims.a != dims.b || base.state.dims() != dims) {
    DetectionOutcome out = detect_basic_sdp(base, target, opts);
    out.diagnostics.notes.insert(out.diagnostics.notes.begin(),
                                 "enhanced mode needs equal local dimensions: using basic-sdp");
    return out;
  }
  DetectionOutcome out;
  out.mode = DetectionMode::Enhanced;
  out.base_used = base;

  const LinearSystem sys = assemble_enhanced_system(base.state, target);
  const std::vector<LocalMap> basis_a = basis_maps(dims.a, dims.a);
  const std::vector<LocalMap> basis_b = basis_maps(dims.b, dims.b);
  const Index na = static_cast<Index>(basis_a.size());
  LmiProblem p;
  p.n_vars = sys.matrix.cols();
  p.equality_matrix = sys.matrix;
  p.equality_rhs = sys.rhs;
  for (const ProductTerm& t : base.ensemble.terms) {
    LmiBlock blk = image_block(basis_b, t.rho_b, na, p.n_vars);
    p.blocks.push_back(std::move(blk));
  }
  for (const ProductTerm& t : base.ensemble.terms) {
    // Basis maps for A occupy the leading columns.
    LmiBlock blk = image_block(basis_a, t.rho_a, 0, p.n_vars);
    p.blocks.push_back(std::move(blk));
  }
  const FeasResult r = solve_feasibility(p, solver_options(opts));
  out.diagnostics.margin = r.margin;
  out.diagnostics.scale = r.scale;
  out.diagnostics.equality_residual = r.equality_residual;
  out.diagnostics.iterations = r.iterations;
  if (r.status != FeasStatus::Feasible) {
    out.diagnostics.notes.push_back("solver: " + to_string(r.status) + " (margin " +
                                    fmt(r.margin) + ")");
    return out;
  }
  const LocalMap map_a = map_from_parameters(r.x.head(na), dims.a, dims.a);
  const LocalMap map_b = map_from_parameters(r.x.tail(r.x.size() - na), dims.b, dims.b);
  BuildOptions bo;
  bo.cert_tol = opts.cert_tol;
  finalize(out, target, [&] { return build_from_enhanced(base.ensemble, map_a, map_b, target, bo); },
           opts);
  return out;
}

std::uint64_t trial_seed(std::uint64_t seed, int k) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(k)};
  std::mt19937_64 rng(seq);
  return rng();
}

BaseState random_trial_base(Index d, std::uint64_t seed, int k) {
  std::mt19937_64 rng(trial_seed(seed, k));
  const Index lo = d * d;
  const Index hi = d * d * d * d + 1;
  std::uniform_int_distribution<Index> count(lo, hi);
  const Index n = count(rng);
  return BaseState::from_ensemble(random_separable(d, d, n, rng()));
}

namespace {

struct Trial {
  std::string source;
  std::function<std::optional<BaseState>(TrialRecord&)> make_base;
};

DetectionOutcome run_trial(const BaseState& base, const BipartiteState& target, bool enhanced,
                           const DetectorOptions& opts) {
  DetectionOutcome out = detect_linear(base, target, opts);
  const Dims dims = target.dims();
  if (out.verdict == Verdict::Separable || !enhanced || dims.a != dims.b) return out;
  DetectionOutcome enh = detect_enhanced(base, target, opts);
  enh.diagnostics.notes.insert(enh.diagnostics.notes.begin(), out.diagnostics.notes.begin(),
                               out.diagnostics.notes.end());
  return enh;
}

}  // namespace

DetectionOutcome detect_auto(const BipartiteState& target, const AutoPolicy& policy,
                             const DetectorOptions& opts) {
  const Dims dims = target.dims();
  std::vector<TrialRecord> records;

  if (policy.analytical && dims.a == dims.b) {
    TrialRecord rec;
    rec.index = 0;
    rec.source = "analytical";
    rec.mode = DetectionMode::Analytical;
    const CriterionReport check = corollary1_check(target);
    rec.margin = check.statistic - check.threshold;
    rec.note = "eigenvalue criterion: " + to_string(check.verdict);
    if (!check.note.empty()) rec.note += " (" + check.note + ")";
    if (check.verdict == CriterionVerdict::Separable) {
      DetectionOutcome out;
      out.mode = DetectionMode::Analytical;
      BuildOptions bo;
      bo.cert_tol = opts.cert_tol;
      finalize(out, target, [&] { return build_corollary1(target, bo); }, opts);
      rec.verdict = out.verdict;
      if (out.verdict == Verdict::Separable) {
        out.diagnostics.margin = rec.margin;
        if (out.certificate->provenance.base) {
          out.base_used = BaseState::from_ensemble(*out.certificate->provenance.base);
        }
        out.diagnostics.trials.push_back(rec);
        return out;
      }
      rec.note += "; " + out.diagnostics.notes.back();
    }
    records.push_back(rec);
  }

  std::vector<Trial> trials;
  for (std::size_t i = 0; i < policy.table.size(); ++i) {
    const BaseState* b = &policy.table[i];
    trials.push_back({"table:" + std::to_string(i), [b, dims](TrialRecord& rec) {
                        const Dims bd = b->state.dims();
                        if (bd.a != dims.a || bd.b != dims.a) {
                          rec.note = "skipped: base dimensions do not match";
                          return std::optional<BaseState>{};
                        }
                        return std::optional<BaseState>{*b};
                      }});
  }
  for (int k = 0; k < policy.n_bases; ++k) {
    const std::uint64_t s = trial_seed(policy.seed, k);
    trials.push_back({"random:" + std::to_string(s), [&policy, dims, k, &opts](TrialRecord& rec) {
                        BaseState b = random_trial_base(dims.a, policy.seed, k);
                        const FaithfulnessReport f = is_faithful(b.state, opts.faithful_tol);
                        rec.sigma_min = f.sigma_min;
                        if (!f.faithful) {
                          rec.note = "skipped: random base not faithful";
                          return std::optional<BaseState>{};
                        }
                        return std::optional<BaseState>{std::move(b)};
                      }});
  }

  const int jobs = std::max(1, policy.jobs);
  const int index_offset = static_cast<int>(records.size());
  for (std::size_t start = 0; start < trials.size(); start += static_cast<std::size_t>(jobs)) {
    const std::size_t stop = std::min(trials.size(), start + static_cast<std::size_t>(jobs));
    std::vector<std::optional<DetectionOutcome>> outcomes(stop - start);
    std::vector<TrialRecord> recs(stop - start);
    std::vector<std::exception_ptr> errors(stop - start);
    auto work = [&](std::size_t slot) {
      try {
        TrialRecord& rec = recs[slot];
        rec.index = index_offset + static_cast<int>(start + slot);
        rec.source = trials[start + slot].source;
        std::optional<BaseState> base = trials[start + slot].make_base(rec);
        if (!base) return;
        if (std::isnan(rec.sigma_min)) rec.sigma_min = is_faithful(base->state, opts.faithful_tol).sigma_min;
        outcomes[slot] = run_trial(*base, target, policy.enhanced, opts);
        rec.mode = outcomes[slot]->mode;
        rec.verdict = outcomes[slot]->verdict;
        rec.margin = outcomes[slot]->diagnostics.margin;
        if (!outcomes[slot]->diagnostics.notes.empty()) {
          rec.note = outcomes[slot]->diagnostics.notes.back();
        }
      } catch (...) {
        errors[slot] = std::current_exception();
      }
    };
    if (jobs == 1) {
      work(0);
    } else {
      std::vector<std::thread> pool;
      for (std::size_t slot = 0; slot < stop - start; ++slot) pool.emplace_back(work, slot);
      for (std::thread& t : pool) t.join();
    }
    for (std::size_t slot = 0; slot < stop - start; ++slot) {
      if (errors[slot]) std::rethrow_exception(errors[slot]);
      records.push_back(recs[slot]);
      if (outcomes[slot] && outcomes[slot]->verdict == Verdict::Separable) {
        DetectionOutcome out = std::move(*outcomes[slot]);
        out.diagnostics.trials = std::move(records);
        return out;
      }
    }
  }

  DetectionOutcome out;
  out.mode = policy.enhanced && dims.a == dims.b ? DetectionMode::Enhanced : DetectionMode::Linear;
  out.diagnostics.trials = std::move(records);
  out.diagnostics.notes.push_back("no base produced a certificate after " +
                                  std::to_string(out.diagnostics.trials.size()) + " trials");
  return out;
}

bool sampled_positive(const LocalMap& map, int samples, std::uint64_t seed, double floor) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Index> rank(1, map.d_in());
  for (int s = 0; s < samples; ++s) {
    const CMatrix rho = random_density_matrix(map.d_in(), rank(rng), rng);
    if (min_eigenvalue(hermitian_part(sepcert::apply(map, rho))) < -floor) return false;
  }
  return true;
}

std::vector<TableEntry> table_prune(std::vector<TableEntry> table, const PruneOptions& opts) {
  std::vector<BaseState> bases;
  bases.reserve(table.size());
  for (const TableEntry& e : table) bases.push_back(BaseState::from_ensemble(e.ensemble));

  // Later entries are tested first, so the earliest of a redundant group survives.
  for (std::size_t j = table.size(); j-- > 0;) {
    if (table[j].pruned) continue;
    for (std::size_t i = 0; i < table.size(); ++i) {
      if (i == j || table[i].pruned) continue;
      if (bases[i].state.dims() != bases[j].state.dims()) continue;
      const DetectionOutcome out = detect_basic_sdp(bases[i], bases[j].state, opts.detector);
      if (out.verdict != Verdict::Separable) continue;
      const LocalMap map = map_of_choi(out.certificate->provenance.maps.front().choi);
      if (!sampled_positive(map, opts.positivity_samples, opts.seed, opts.positivity_floor)) {
        continue;
      }
      table[j].pruned = true;
      table[j].pruned_by = table[i].digest.empty() ? std::to_string(i) : table[i].digest;
      break;
    }
  }
  return table;
}

}  // namespace sepcert
