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

#include <stdexcept>
#include <string>

namespace sepcert {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes or declared local dimensions do not fit together.
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// A value violates a documented invariant (Hermiticity, PSD, unit trace, ...).
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

/// The reduced state Tr_A[sigma] is not invertible above the eigenvalue floor.
class SingularMarginal : public Error {
 public:
  using Error::Error;
};

}  // namespace sepcert
