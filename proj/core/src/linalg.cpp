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

#include "sepcert/linalg.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <sstream>
#include <vector>

namespace sepcert {

namespace {

void require_square_dims(const CMatrix& m, Dims dims, const char* what) {
  if (dims.a < 1 || dims.b < 1 || m.rows() != dims.total() || m.cols() != dims.total()) {
    std::ostringstream os;
    os << what << ": matrix is " << m.rows() << "x" << m.cols() << " but dims are (" << dims.a
       << ", " << dims.b << ")";
    throw DimensionMismatch(os.str());
  }
}

}  // namespace

BipartiteState BipartiteState::from_matrix(const CMatrix& m, Dims dims, Normalization norm) {
  require_square_dims(m, dims, "BipartiteState");
  if (!is_hermitian(m)) {
    std::ostringstream os;
    os << "state is not Hermitian (defect " << hermiticity_defect(m) << ")";
    throw InvariantViolation(os.str());
  }
  CMatrix h = hermitian_part(m);
  const double lmin = min_eigenvalue(h);
  if (lmin < -kPsdTol) {
    std::ostringstream os;
    os << "state is not positive semidefinite (min eigenvalue " << lmin << ")";
    throw InvariantViolation(os.str());
  }
  if (norm == Normalization::UnitTrace) {
    const double tr = h.trace().real();
    if (std::abs(tr - 1.0) > kTraceTol) {
      std::ostringstream os;
      os << "state trace is " << tr << ", expected 1";
      throw InvariantViolation(os.str());
    }
  }
  return BipartiteState(std::move(h), dims, norm);
}

CMatrix tensor_product(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

CMatrix partial_trace(const CMatrix& m, Dims dims, Subsystem traced) {
  require_square_dims(m, dims, "partial_trace");
  if (traced == Subsystem::A) {
    CMatrix out = CMatrix::Zero(dims.b, dims.b);
    for (Index k = 0; k < dims.a; ++k) out += m.block(k * dims.b, k * dims.b, dims.b, dims.b);
    return out;
  }
  CMatrix out(dims.a, dims.a);
  for (Index i = 0; i < dims.a; ++i) {
    for (Index j = 0; j < dims.a; ++j) {
      out(i, j) = m.block(i * dims.b, j * dims.b, dims.b, dims.b).trace();
    }
  }
  return out;
}

CMatrix partial_trace(const BipartiteState& s, Subsystem traced) {
  return partial_trace(s.matrix(), s.dims(), traced);
}

CMatrix partial_transpose(const CMatrix& m, Dims dims, Subsystem which) {
  require_square_dims(m, dims, "partial_transpose");
  CMatrix out(m.rows(), m.cols());
  for (Index i = 0; i < dims.a; ++i) {
    for (Index j = 0; j < dims.a; ++j) {
      if (which == Subsystem::B) {
        out.block(i * dims.b, j * dims.b, dims.b, dims.b) =
            m.block(i * dims.b, j * dims.b, dims.b, dims.b).transpose();
      } else {
        out.block(i * dims.b, j * dims.b, dims.b, dims.b) =
            m.block(j * dims.b, i * dims.b, dims.b, dims.b);
      }
    }
  }
  return out;
}

CMatrix partial_transpose(const BipartiteState& s, Subsystem which) {
  return partial_transpose(s.matrix(), s.dims(), which);
}

CMatrix swap_operator(Index d) {
  if (d < 1) throw DimensionMismatch("swap_operator: dimension must be >= 1");
  CMatrix e = CMatrix::Zero(d * d, d * d);
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < d; ++j) e(i * d + j, j * d + i) = 1.0;
  }
  return e;
}

double hermiticity_defect(const CMatrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

bool is_hermitian(const CMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  if (m.size() == 0) return true;
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  return hermiticity_defect(m) <= tol * scale;
}

CMatrix hermitian_part(const CMatrix& m) { return 0.5 * (m + m.adjoint()); }

Spectrum eigh(const CMatrix& m) {
  if (!is_hermitian(m)) {
    std::ostringstream os;
    os << "eigh: matrix is not Hermitian (defect " << hermiticity_defect(m) << ")";
    throw InvariantViolation(os.str());
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(hermitian_part(m));
  return Spectrum{solver.eigenvalues(), solver.eigenvectors()};
}

RVector eigenvalues(const CMatrix& m) {
  if (!is_hermitian(m)) {
    std::ostringstream os;
    os << "eigenvalues: matrix is not Hermitian (defect " << hermiticity_defect(m) << ")";
    throw InvariantViolation(os.str());
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(hermitian_part(m), Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

double min_eigenvalue(const CMatrix& m) {
  if (m.size() == 0) throw DimensionMismatch("min_eigenvalue: empty matrix");
  return eigenvalues(m)(0);
}

CMatrix psd_power(const CMatrix& m, double exponent, double floor) {
  const Spectrum sp = eigh(m);
  RVector f(sp.values.size());
  for (Index i = 0; i < f.size(); ++i) f(i) = std::pow(std::max(sp.values(i), floor), exponent);
  return sp.vectors * f.asDiagonal() * sp.vectors.adjoint();
}

double smallest_singular_value(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMatrix> svd(m);
  const RVector& sv = svd.singularValues();
  // Singular values of a non-square matrix: the min(rows, cols) ones.
  return sv(sv.size() - 1);
}

double frobenius_norm(const CMatrix& m) { return m.norm(); }

RVector hermitian_coordinates(const CMatrix& h) {
  const Index d = h.rows();
  RVector x(d * d);
  Index k = 0;
  for (Index a = 0; a < d; ++a) x(k++) = h(a, a).real();
  const double r2 = std::sqrt(2.0);
  for (Index a = 0; a < d; ++a) {
    for (Index b = a + 1; b < d; ++b) {
      // <E_sym, H> and <E_asym, H> for the orthonormal basis elements.
      x(k++) = r2 * 0.5 * (h(a, b) + h(b, a)).real();
      x(k++) = r2 * 0.5 * (h(b, a) - h(a, b)).imag();
    }
  }
  return x;
}

CMatrix hermitian_from_coordinates(const RVector& x, Index dim) {
  if (x.size() != dim * dim) throw DimensionMismatch("hermitian_from_coordinates: length != dim^2");
  CMatrix h = CMatrix::Zero(dim, dim);
  Index k = 0;
  for (Index a = 0; a < dim; ++a) h(a, a) = x(k++);
  const double inv_r2 = 1.0 / std::sqrt(2.0);
  for (Index a = 0; a < dim; ++a) {
    for (Index b = a + 1; b < dim; ++b) {
      const double s = x(k++) * inv_r2;
      const double t = x(k++) * inv_r2;
      h(a, b) = Complex(s, -t);
      h(b, a) = Complex(s, t);
    }
  }
  return h;
}

CMatrix hermitian_basis_element(Index dim, Index k) {
  RVector e = RVector::Zero(dim * dim);
  e(k) = 1.0;
  return hermitian_from_coordinates(e, dim);
}

std::string content_digest(const CMatrix& m, Dims dims) {
  std::vector<unsigned char> bytes;
  bytes.reserve(16 + 16 * static_cast<std::size_t>(m.size()));
  auto put = [&bytes](const void* p, std::size_t n) {
    const auto* c = static_cast<const unsigned char*>(p);
    bytes.insert(bytes.end(), c, c + n);
  };
  const std::int64_t da = dims.a, db = dims.b;
  put(&da, sizeof da);
  put(&db, sizeof db);
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      const double re = m(i, j).real(), im = m(i, j).imag();
      put(&re, sizeof re);
      put(&im, sizeof im);
    }
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr);
  static const char* hex = "0123456789abcdef";
  std::string out = "sha256:";
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[md[i] >> 4]);
    out.push_back(hex[md[i] & 15]);
  }
  return out;
}

}  // namespace sepcert
