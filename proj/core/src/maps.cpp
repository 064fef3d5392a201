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

#include "sepcert/maps.hpp"

#include <algorithm>
#include <sstream>

namespace sepcert {

namespace {

CVector vectorize(const CMatrix& m) {
  CVector v(m.size());
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) v(i * m.cols() + j) = m(i, j);
  }
  return v;
}

CMatrix unvectorize(const CVector& v, Index d) {
  CMatrix m(d, d);
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < d; ++j) m(i, j) = v(i * d + j);
  }
  return m;
}

}  // namespace

LocalMap::LocalMap(Index d_in, Index d_out, CMatrix transfer)
    : d_in_(d_in), d_out_(d_out), transfer_(std::move(transfer)) {
  if (d_in < 1 || d_out < 1 || transfer_.rows() != d_out * d_out ||
      transfer_.cols() != d_in * d_in) {
    std::ostringstream os;
    os << "LocalMap: transfer is " << transfer_.rows() << "x" << transfer_.cols()
       << ", expected " << d_out * d_out << "x" << d_in * d_in;
    throw DimensionMismatch(os.str());
  }
}

LocalMap LocalMap::identity(Index d) { return LocalMap(d, d, CMatrix::Identity(d * d, d * d)); }

LocalMap LocalMap::zero(Index d_in, Index d_out) {
  return LocalMap(d_in, d_out, CMatrix::Zero(d_out * d_out, d_in * d_in));
}

LocalMap LocalMap::transpose(Index d) {
  CMatrix t = CMatrix::Zero(d * d, d * d);
  for (Index k = 0; k < d; ++k) {
    for (Index l = 0; l < d; ++l) t(k * d + l, l * d + k) = 1.0;
  }
  return LocalMap(d, d, std::move(t));
}

LocalMap LocalMap::trace_and_replace(const CMatrix& replacement, Index d_in) {
  if (replacement.rows() != replacement.cols()) {
    throw DimensionMismatch("trace_and_replace: replacement must be square");
  }
  const Index d_out = replacement.rows();
  CVector trace_row = vectorize(CMatrix::Identity(d_in, d_in));
  CMatrix t = vectorize(replacement) * trace_row.transpose();
  return LocalMap(d_in, d_out, std::move(t));
}

LocalMap LocalMap::from_kraus(std::span<const CMatrix> kraus) {
  if (kraus.empty()) throw DimensionMismatch("from_kraus: no Kraus operators");
  const Index d_out = kraus.front().rows(), d_in = kraus.front().cols();
  CMatrix t = CMatrix::Zero(d_out * d_out, d_in * d_in);
  for (const CMatrix& k : kraus) {
    if (k.rows() != d_out || k.cols() != d_in) {
      throw DimensionMismatch("from_kraus: Kraus operators differ in shape");
    }
    // vec(K X K^H) = (K (x) conj(K)) vec(X) for row-major vec.
    t += tensor_product(k, k.conjugate());
  }
  return LocalMap(d_in, d_out, std::move(t));
}

LocalMap LocalMap::sandwich(const CMatrix& left, const CMatrix& right) {
  if (left.cols() != right.rows()) throw DimensionMismatch("sandwich: inner shapes differ");
  if (left.rows() != right.cols()) throw DimensionMismatch("sandwich: output is not square");
  return LocalMap(left.cols(), left.rows(), tensor_product(left, right.transpose()));
}

bool LocalMap::is_hermiticity_preserving(double tol) const {
  const double scale = std::max(1.0, transfer_.cwiseAbs().maxCoeff());
  for (Index k = 0; k < d_out_; ++k) {
    for (Index l = 0; l < d_out_; ++l) {
      for (Index r = 0; r < d_in_; ++r) {
        for (Index s = 0; s < d_in_; ++s) {
          if (std::abs(coefficient(l, k, s, r) - std::conj(coefficient(k, l, r, s))) > tol * scale) {
            return false;
          }
        }
      }
    }
  }
  return true;
}

LocalMap LocalMap::operator+(const LocalMap& other) const {
  if (other.d_in_ != d_in_ || other.d_out_ != d_out_) {
    throw DimensionMismatch("LocalMap::operator+: dimension mismatch");
  }
  return LocalMap(d_in_, d_out_, transfer_ + other.transfer_);
}

LocalMap LocalMap::operator*(double alpha) const { return LocalMap(d_in_, d_out_, alpha * transfer_); }

CMatrix apply(const LocalMap& map, const CMatrix& rho) {
  if (rho.rows() != map.d_in() || rho.cols() != map.d_in()) {
    std::ostringstream os;
    os << "apply: input is " << rho.rows() << "x" << rho.cols() << ", map expects d_in = "
       << map.d_in();
    throw DimensionMismatch(os.str());
  }
  return unvectorize(map.transfer() * vectorize(rho), map.d_out());
}

CMatrix apply_local_B(const LocalMap& map, const CMatrix& s, Dims dims) {
  if (dims.b != map.d_in() || s.rows() != dims.total() || s.cols() != dims.total()) {
    throw DimensionMismatch("apply_local_B: map d_in must equal d_B of the state");
  }
  const Index dout = map.d_out();
  CMatrix out(dims.a * dout, dims.a * dout);
  for (Index m = 0; m < dims.a; ++m) {
    for (Index n = 0; n < dims.a; ++n) {
      out.block(m * dout, n * dout, dout, dout) =
          sepcert::apply(map, s.block(m * dims.b, n * dims.b, dims.b, dims.b));
    }
  }
  return out;
}

CMatrix apply_local_B(const LocalMap& map, const BipartiteState& s) {
  return apply_local_B(map, s.matrix(), s.dims());
}

CMatrix apply_local_A(const LocalMap& map, const CMatrix& s, Dims dims) {
  if (dims.a != map.d_in() || s.rows() != dims.total() || s.cols() != dims.total()) {
    throw DimensionMismatch("apply_local_A: map d_in must equal d_A of the state");
  }
  const Index dout = map.d_out();
  CMatrix out(dout * dims.b, dout * dims.b);
  CMatrix slice(dims.a, dims.a);
  for (Index r = 0; r < dims.b; ++r) {
    for (Index q = 0; q < dims.b; ++q) {
      for (Index m = 0; m < dims.a; ++m) {
        for (Index n = 0; n < dims.a; ++n) slice(m, n) = s(m * dims.b + r, n * dims.b + q);
      }
      const CMatrix image = sepcert::apply(map, slice);
      for (Index k = 0; k < dout; ++k) {
        for (Index l = 0; l < dout; ++l) out(k * dims.b + r, l * dims.b + q) = image(k, l);
      }
    }
  }
  return out;
}

CMatrix apply_local_A(const LocalMap& map, const BipartiteState& s) {
  return apply_local_A(map, s.matrix(), s.dims());
}

CMatrix apply_local_sum(const LocalMap& map_a, const LocalMap& map_b, const BipartiteState& s) {
  if (map_a.d_in() != map_a.d_out() || map_b.d_in() != map_b.d_out()) {
    throw DimensionMismatch("apply_local_sum: both maps must preserve their factor's dimension");
  }
  return apply_local_B(map_b, s) + apply_local_A(map_a, s);
}

ChoiMatrix choi_of_map(const LocalMap& map) {
  const Index din = map.d_in(), dout = map.d_out();
  CMatrix z(din * dout, din * dout);
  const double inv = 1.0 / static_cast<double>(din);
  for (Index r = 0; r < din; ++r) {
    for (Index s = 0; s < din; ++s) {
      for (Index k = 0; k < dout; ++k) {
        for (Index l = 0; l < dout; ++l) {
          z(r * dout + k, s * dout + l) = inv * map.coefficient(k, l, r, s);
        }
      }
    }
  }
  return ChoiMatrix{din, dout, std::move(z)};
}

LocalMap map_of_choi(const ChoiMatrix& choi) {
  const Index din = choi.d_in, dout = choi.d_out;
  if (din < 1 || dout < 1 || choi.z.rows() != din * dout || choi.z.cols() != din * dout) {
    throw DimensionMismatch("map_of_choi: Z must be (d_in*d_out) square");
  }
  CMatrix t(dout * dout, din * din);
  const double scale = static_cast<double>(din);
  for (Index r = 0; r < din; ++r) {
    for (Index s = 0; s < din; ++s) {
      for (Index k = 0; k < dout; ++k) {
        for (Index l = 0; l < dout; ++l) {
          t(k * dout + l, r * din + s) = scale * choi.z(r * dout + k, s * dout + l);
        }
      }
    }
  }
  return LocalMap(din, dout, std::move(t));
}

LocalMap compose(const LocalMap& outer, const LocalMap& inner) {
  if (inner.d_out() != outer.d_in()) {
    throw DimensionMismatch("compose: inner.d_out must equal outer.d_in");
  }
  return LocalMap(inner.d_in(), outer.d_out(), outer.transfer() * inner.transfer());
}

}  // namespace sepcert
