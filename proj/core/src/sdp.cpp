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

#include "sepcert/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

namespace sepcert {

std::string to_string(FeasStatus s) {
  switch (s) {
    case FeasStatus::Feasible:
      return "Feasible";
    case FeasStatus::NotFound:
      return "NotFound";
    case FeasStatus::Inconsistent:
      return "Inconsistent";
  }
  return "?";
}

LmiBlock LmiBlock::from_matrices(const CMatrix& constant, std::span<const CMatrix> coefficients) {
  if (constant.rows() != constant.cols()) throw DimensionMismatch("LmiBlock: constant not square");
  LmiBlock b;
  b.size = constant.rows();
  b.constant = constant;
  b.coefficients.resize(b.size * b.size, static_cast<Index>(coefficients.size()));
  for (std::size_t j = 0; j < coefficients.size(); ++j) {
    const CMatrix& a = coefficients[j];
    if (a.rows() != b.size || a.cols() != b.size) {
      throw DimensionMismatch("LmiBlock: coefficient shape differs from constant");
    }
    b.coefficients.col(static_cast<Index>(j)) = Eigen::Map<const CVector>(a.data(), a.size());
  }
  return b;
}

CMatrix LmiBlock::coefficient(Index j) const {
  return Eigen::Map<const CMatrix>(coefficients.col(j).data(), size, size);
}

CMatrix LmiBlock::evaluate(const RVector& x) const {
  CVector v = coefficients * x.cast<Complex>();
  return constant + Eigen::Map<const CMatrix>(v.data(), size, size);
}

void LmiProblem::validate() const {
  if (equality_matrix.cols() != n_vars && equality_matrix.rows() > 0) {
    throw DimensionMismatch("LmiProblem: equality matrix column count != n_vars");
  }
  if (equality_matrix.rows() != equality_rhs.size()) {
    throw DimensionMismatch("LmiProblem: equality rhs length != equality rows");
  }
  for (const LmiBlock& b : blocks) {
    if (b.constant.rows() != b.size || b.constant.cols() != b.size ||
        b.coefficients.rows() != b.size * b.size || b.coefficients.cols() != n_vars) {
      throw DimensionMismatch("LmiProblem: block shapes inconsistent with n_vars");
    }
    if (!is_hermitian(b.constant)) throw InvariantViolation("LmiProblem: constant block not Hermitian");
    for (Index j = 0; j < n_vars; ++j) {
      if (!is_hermitian(b.coefficient(j))) {
        throw InvariantViolation("LmiProblem: coefficient block not Hermitian");
      }
    }
  }
}

double evaluate_margin(const LmiProblem& p, const RVector& x) {
  double m = std::numeric_limits<double>::infinity();
  for (const LmiBlock& b : p.blocks) m = std::min(m, min_eigenvalue(b.evaluate(x)));
  return m;
}

double equality_residual(const LmiProblem& p, const RVector& x) {
  if (p.equality_matrix.rows() == 0) return 0.0;
  return (p.equality_matrix * x - p.equality_rhs).norm();
}

EqualityReduction eliminate_equalities(const LmiProblem& p, double eps_eq) {
  p.validate();
  EqualityReduction r;
  const Index n = p.n_vars;
  if (p.equality_matrix.rows() == 0 || n == 0) {
    r.particular = RVector::Zero(n);
    r.nullspace = RMatrix::Identity(n, n);
    r.residual = p.equality_rhs.size() > 0 ? p.equality_rhs.norm() : 0.0;
  } else {
    Eigen::JacobiSVD<RMatrix> svd(p.equality_matrix, Eigen::ComputeThinU | Eigen::ComputeFullV);
    const RVector& sv = svd.singularValues();
    const double cutoff =
        (sv.size() > 0 ? sv(0) : 0.0) * 1e-11 * static_cast<double>(std::max(p.equality_matrix.rows(), n));
    Index rank = 0;
    while (rank < sv.size() && sv(rank) > cutoff) ++rank;
    const RVector ub = svd.matrixU().leftCols(rank).transpose() * p.equality_rhs;
    r.particular = svd.matrixV().leftCols(rank) * ub.cwiseQuotient(sv.head(rank));
    r.nullspace = svd.matrixV().rightCols(n - rank);
    r.residual = (p.equality_matrix * r.particular - p.equality_rhs).norm();
  }
  const double bnorm = p.equality_rhs.size() > 0 ? p.equality_rhs.norm() : 0.0;
  r.consistent = r.residual <= eps_eq * std::max(bnorm, 1e-300);

  r.reduced.n_vars = r.nullspace.cols();
  r.reduced.equality_matrix.resize(0, r.reduced.n_vars);
  r.reduced.equality_rhs.resize(0);
  r.reduced.blocks.reserve(p.blocks.size());
  const Eigen::VectorXcd x0 = r.particular.cast<Complex>();
  const CMatrix ncx = r.nullspace.cast<Complex>();
  for (const LmiBlock& b : p.blocks) {
    LmiBlock rb;
    rb.size = b.size;
    CVector c = b.coefficients * x0;
    rb.constant = b.constant + Eigen::Map<const CMatrix>(c.data(), b.size, b.size);
    rb.constant = hermitian_part(rb.constant);
    rb.coefficients = b.coefficients * ncx;
    r.reduced.blocks.push_back(std::move(rb));
  }
  return r;
}

namespace {

// Working form of the reduced problem: blocks normalized by `scale` and the
// variables whitened so that the block map has an identity Gram matrix.
struct Workspace {
  std::vector<CMatrix> constants;
  std::vector<CMatrix> coefficients;  // (k^2) x q, column-major vec
  std::vector<Index> sizes;
  RMatrix whitening;                  // p x q, y = whitening * z
  Index q = 0;
  double barrier_dim = 0.0;           // sum of block sizes, plus one for the ball
};

// Radius of the ball ||z|| <= R that keeps the barrier bounded below when
// some PSD-but-singular direction leaves t unchanged.
constexpr double kBallRadius = 1e4;

Workspace build_workspace(const LmiProblem& reduced, double scale) {
  Workspace w;
  const Index p = reduced.n_vars;
  RMatrix gram = RMatrix::Zero(p, p);
  for (const LmiBlock& b : reduced.blocks) {
    w.sizes.push_back(b.size);
    w.barrier_dim += static_cast<double>(b.size);
    w.constants.push_back(b.constant / scale);
    if (p > 0) gram += (b.coefficients.adjoint() * b.coefficients).real() / (scale * scale);
  }
  if (p > 0) {
    Eigen::SelfAdjointEigenSolver<RMatrix> es(gram);
    const RVector& ev = es.eigenvalues();
    const double top = ev.size() > 0 ? ev(ev.size() - 1) : 0.0;
    std::vector<Index> keep;
    // Blocks are normalized to unit scale, so a direction whose Gram eigenvalue is
    // at rounding level does not move them; whitening it would blow up noise.
    const double floor = 1e-12 * std::max(top, 1.0);
    for (Index i = 0; i < ev.size(); ++i) {
      if (ev(i) > floor) keep.push_back(i);
    }
    w.q = static_cast<Index>(keep.size());
    w.whitening.resize(p, w.q);
    for (Index c = 0; c < w.q; ++c) {
      const Index i = keep[static_cast<std::size_t>(c)];
      w.whitening.col(c) = es.eigenvectors().col(i) / std::sqrt(ev(i));
    }
  } else {
    w.whitening.resize(0, 0);
  }
  const CMatrix wc = w.whitening.cast<Complex>();
  for (const LmiBlock& b : reduced.blocks) {
    if (w.q > 0) {
      w.coefficients.push_back((b.coefficients * wc) / scale);
    } else {
      w.coefficients.push_back(CMatrix(b.size * b.size, 0));
    }
  }
  return w;
}

CMatrix block_at(const Workspace& w, std::size_t i, const RVector& z) {
  const Index k = w.sizes[i];
  CMatrix f = w.constants[i];
  if (w.q > 0) {
    CVector v = w.coefficients[i] * z.cast<Complex>();
    f += Eigen::Map<const CMatrix>(v.data(), k, k);
  }
  return hermitian_part(f);
}

double workspace_margin(const Workspace& w, const RVector& z) {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < w.sizes.size(); ++i) m = std::min(m, min_eigenvalue(block_at(w, i, z)));
  return m;
}

// -sum log det (F_i(z) - t I), or nullopt when some shifted block is not PD.
std::optional<double> barrier_value(const Workspace& w, const RVector& z, double t) {
  const double slack = kBallRadius * kBallRadius - z.squaredNorm();
  if (!(slack > 0.0)) return std::nullopt;
  double phi = -std::log(slack);
  for (std::size_t i = 0; i < w.sizes.size(); ++i) {
    const Index k = w.sizes[i];
    CMatrix g = block_at(w, i, z) - t * CMatrix::Identity(k, k);
    Eigen::LLT<CMatrix> llt(g);
    if (llt.info() != Eigen::Success) return std::nullopt;
    const CVector diag = llt.matrixLLT().diagonal();
    for (Index j = 0; j < k; ++j) {
      const double lj = diag(j).real();
      if (!(lj > 0.0) || !std::isfinite(lj)) return std::nullopt;
      phi -= 2.0 * std::log(lj);
    }
  }
  return phi;
}

struct NewtonSystem {
  RMatrix hessian;
  RVector gradient;  // of -tau t - sum log det
};

// Variables ordered (z_0..z_{q-1}, t).
NewtonSystem newton_system(const Workspace& w, const RVector& z, double t, double tau) {
  const Index q = w.q;
  NewtonSystem ns{RMatrix::Zero(q + 1, q + 1), RVector::Zero(q + 1)};
  ns.gradient(q) = -tau;
  if (q > 0) {
    const double slack = kBallRadius * kBallRadius - z.squaredNorm();
    ns.gradient.head(q) += 2.0 * z / slack;
    ns.hessian.topLeftCorner(q, q) += (4.0 / (slack * slack)) * z * z.transpose();
    ns.hessian.topLeftCorner(q, q).diagonal().array() += 2.0 / slack;
  }
  for (std::size_t i = 0; i < w.sizes.size(); ++i) {
    const Index k = w.sizes[i];
    const CMatrix g = block_at(w, i, z) - t * CMatrix::Identity(k, k);
    Eigen::LLT<CMatrix> llt(g);
    const CMatrix linv =
        llt.matrixL().solve(CMatrix::Identity(k, k));  // L^{-1}
    const CMatrix ginv = linv.adjoint() * linv;
    // vec(L^{-1} M L^{-H}) = (conj(L^{-1}) (x) L^{-1}) vec(M), column-major vec.
    const CMatrix kron = tensor_product(linv.conjugate(), linv);
    CMatrix s(k * k, q + 1);
    if (q > 0) s.leftCols(q) = kron * w.coefficients[i];
    // Coefficient of t is -I, so S_t = -L^{-1} L^{-H}.
    const CMatrix st = -(linv * linv.adjoint());
    s.col(q) = Eigen::Map<const CVector>(st.data(), k * k);

    RMatrix v(2 * k * k, q + 1);
    v.topRows(k * k) = s.real();
    v.bottomRows(k * k) = s.imag();
    ns.hessian.noalias() += v.transpose() * v;

    const CVector gv = Eigen::Map<const CVector>(ginv.data(), k * k);
    if (q > 0) ns.gradient.head(q) -= (gv.adjoint() * w.coefficients[i]).real().transpose();
    ns.gradient(q) += ginv.trace().real();
  }
  return ns;
}

}  // namespace

FeasResult solve_feasibility(const LmiProblem& p, const SolverOptions& opts) {
  FeasResult result;
  const EqualityReduction red = eliminate_equalities(p, opts.eps_eq);
  if (!red.consistent) {
    result.status = FeasStatus::Inconsistent;
    result.equality_residual = red.residual;
    return result;
  }

  double scale = 0.0;
  for (const LmiBlock& b : red.reduced.blocks) {
    if (b.size > 0) scale = std::max(scale, eigenvalues(b.constant).cwiseAbs().maxCoeff());
  }
  if (!(scale > 1e-300)) scale = 1.0;
  result.scale = scale;

  const Workspace w = build_workspace(red.reduced, scale);
  RVector z = RVector::Zero(w.q);
  RVector best_z = z;
  double best = w.sizes.empty() ? std::numeric_limits<double>::infinity() : workspace_margin(w, z);
  result.margin_history.push_back(best * scale);

  auto finalize = [&](const RVector& zz) {
    RVector y = w.q > 0 ? RVector(w.whitening * zz) : RVector::Zero(red.reduced.n_vars);
    result.x = red.particular + red.nullspace * y;
    // Re-evaluate on the caller's problem, not the working form.
    result.margin = p.blocks.empty() ? std::numeric_limits<double>::infinity()
                                     : evaluate_margin(p, result.x);
    result.equality_residual = equality_residual(p, result.x);
    const double bnorm = p.equality_rhs.size() > 0 ? p.equality_rhs.norm() : 0.0;
    const bool eq_ok = result.equality_residual <= opts.eps_eq * std::max(bnorm, 1e-300) ||
                       p.equality_matrix.rows() == 0;
    result.status = (eq_ok && result.margin / scale >= opts.eps_feas) ? FeasStatus::Feasible
                                                                       : FeasStatus::NotFound;
  };

  if (w.q == 0 || w.sizes.empty()) {
    finalize(z);
    return result;
  }

  const double m = w.barrier_dim + 1.0;
  double t = best - 1.0;
  double tau = m;
  constexpr double kGrowth = 10.0;
  constexpr double kUnbounded = 1e3;
  int stalled_outer = 0;

  while (result.iterations < opts.max_iter) {
    // Centering.
    bool centered = false;
    bool stalled = false;
    for (int inner = 0; inner < 100 && result.iterations < opts.max_iter; ++inner) {
      const NewtonSystem ns = newton_system(w, z, t, tau);
      RMatrix h = ns.hessian;
      const double ridge = 1e-14 * std::max(1.0, h.diagonal().maxCoeff());
      h.diagonal().array() += ridge;
      const RVector step = -h.ldlt().solve(ns.gradient);
      const double decrement2 = -ns.gradient.dot(step);
      if (!std::isfinite(decrement2)) {
        stalled = true;
        break;
      }
      if (decrement2 < 1e-10) {
        centered = true;
        break;
      }
      const double phi0 = -tau * t + *barrier_value(w, z, t);
      double alpha = 1.0;
      bool accepted = false;
      while (alpha > 1e-14) {
        const RVector zn = z + alpha * step.head(w.q);
        const double tn = t + alpha * step(w.q);
        if (auto bv = barrier_value(w, zn, tn)) {
          if (-tau * tn + *bv <= phi0 - 0.01 * alpha * decrement2) {
            z = zn;
            t = tn;
            accepted = true;
            break;
          }
        }
        alpha *= 0.5;
      }
      ++result.iterations;
      if (!accepted) {
        stalled = true;
        break;
      }
      const double margin = workspace_margin(w, z);
      if (margin > best) {
        best = margin;
        best_z = z;
      }
      result.margin_history.push_back(best * scale);
      if (best >= opts.target_margin || t > kUnbounded) break;
      if (decrement2 < 1e-8) {
        centered = true;
        break;
      }
    }

    if (best >= opts.target_margin || t > kUnbounded) break;
    if (m / tau < opts.gap_tol) break;
    if (centered && opts.early_not_found && t + 2.0 * m / tau < opts.eps_feas) break;
    if (stalled) {
      if (++stalled_outer >= 2) break;
    } else {
      stalled_outer = 0;
    }
    tau *= kGrowth;
  }

  finalize(best_z);
  return result;
}

}  // namespace sepcert
