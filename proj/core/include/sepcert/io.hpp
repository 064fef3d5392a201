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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sepcert/certificate.hpp"
#include "sepcert/detector.hpp"
#include "sepcert/states.hpp"

namespace sepcert {

inline constexpr int kFormatVersion = 1;

/// Malformed or inconsistent file contents.
class FormatError : public Error {
 public:
  using Error::Error;
};

struct StateMeta {
  std::string label;
  std::optional<std::uint64_t> seed;
};

struct StateFile {
  BipartiteState state;
  StateMeta meta;
};

// All documents are JSON text. Matrices are flat row-major lists of
// [re, im] pairs; doubles are written with round-trip precision.

std::string state_to_json(const BipartiteState& s, const StateMeta& meta = {});
StateFile state_from_json(const std::string& text);

std::string ensemble_to_json(const ProductEnsemble& e, const StateMeta& meta = {});
/// Validates the ensemble invariants.
ProductEnsemble ensemble_from_json(const std::string& text);

std::string certificate_to_json(const Certificate& c);
/// Structural parse only; invariants are left to verify_certificate.
Certificate certificate_from_json(const std::string& text);

struct BaseTable {
  Dims dims;
  std::vector<TableEntry> entries;
};

std::string table_to_json(const BaseTable& t);
/// Checks that every entry reassembles to its recorded digest.
BaseTable table_from_json(const std::string& text);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace sepcert
