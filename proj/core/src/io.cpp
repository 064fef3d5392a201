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

#include "sepcert/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace sepcert {

using nlohmann::json;

namespace {

json matrix_json(const CMatrix& m) {
  json out = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) out.push_back({m(i, j).real(), m(i, j).imag()});
  }
  return out;
}

CMatrix matrix_from(const json& j, Index rows, Index cols, const std::string& what) {
  if (!j.is_array() || static_cast<Index>(j.size()) != rows * cols) {
    throw FormatError(what + ": expected " + std::to_string(rows * cols) + " [re, im] entries");
  }
  CMatrix m(rows, cols);
  for (Index k = 0; k < rows * cols; ++k) {
    const json& e = j[static_cast<std::size_t>(k)];
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
      throw FormatError(what + ": entry " + std::to_string(k) + " is not an [re, im] pair");
    }
    m(k / cols, k % cols) = Complex(e[0].get<double>(), e[1].get<double>());
  }
  return m;
}

Dims dims_from(const json& j) {
  if (!j.is_array() || j.size() != 2) throw FormatError("dims must be [dA, dB]");
  const Index a = j[0].get<Index>();
  const Index b = j[1].get<Index>();
  if (a < 1 || b < 1) throw FormatError("dims must be positive");
  return {a, b};
}

void expect_format(const json& doc, const std::string& format) {
  if (!doc.is_object() || doc.value("format", "") != format) {
    throw FormatError("not a " + format + " document");
  }
  if (doc.value("version", 0) != kFormatVersion) {
    throw FormatError(format + ": unsupported version");
  }
}

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("invalid JSON: ") + e.what());
  }
}

json ensemble_body(const ProductEnsemble& e) {
  json terms = json::array();
  for (const ProductTerm& t : e.terms) {
    terms.push_back({{"weight", t.weight}, {"rho_a", matrix_json(t.rho_a)},
                     {"rho_b", matrix_json(t.rho_b)}});
  }
  return {{"dims", {e.dims.a, e.dims.b}}, {"terms", terms}};
}

ProductEnsemble ensemble_body_from(const json& j) {
  ProductEnsemble e;
  e.dims = dims_from(j.at("dims"));
  const json& terms = j.at("terms");
  if (!terms.is_array()) throw FormatError("terms must be a list");
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const json& t = terms[i];
    const std::string tag = "term " + std::to_string(i);
    e.terms.push_back({t.at("weight").get<double>(),
                       matrix_from(t.at("rho_a"), e.dims.a, e.dims.a, tag + " rho_a"),
                       matrix_from(t.at("rho_b"), e.dims.b, e.dims.b, tag + " rho_b")});
  }
  return e;
}

template <typename F>
auto guarded(F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed document: ") + e.what());
  }
}

}  // namespace

std::string state_to_json(const BipartiteState& s, const StateMeta& meta) {
  json doc = {{"format", "sepcert-state"},
              {"version", kFormatVersion},
              {"dims", {s.dims().a, s.dims().b}},
              {"matrix", matrix_json(s.matrix())}};
  if (!meta.label.empty()) doc["label"] = meta.label;
  if (meta.seed) doc["seed"] = *meta.seed;
  return doc.dump(1) + "\n";
}

StateFile state_from_json(const std::string& text) {
  return guarded([&] {
    const json doc = parse(text);
    expect_format(doc, "sepcert-state");
    const Dims dims = dims_from(doc.at("dims"));
    const CMatrix m = matrix_from(doc.at("matrix"), dims.total(), dims.total(), "matrix");
    StateMeta meta;
    meta.label = doc.value("label", "");
    if (doc.contains("seed")) meta.seed = doc.at("seed").get<std::uint64_t>();
    try {
      return StateFile{BipartiteState::from_matrix(m, dims), meta};
    } catch (const InvariantViolation& e) {
      throw FormatError(std::string("invalid state: ") + e.what());
    }
  });
}

std::string ensemble_to_json(const ProductEnsemble& e, const StateMeta& meta) {
  json doc = {{"format", "sepcert-ensemble"}, {"version", kFormatVersion}};
  doc.update(ensemble_body(e));
  if (!meta.label.empty()) doc["label"] = meta.label;
  if (meta.seed) doc["seed"] = *meta.seed;
  return doc.dump(1) + "\n";
}

ProductEnsemble ensemble_from_json(const std::string& text) {
  return guarded([&] {
    const json doc = parse(text);
    expect_format(doc, "sepcert-ensemble");
    ProductEnsemble e = ensemble_body_from(doc);
    const std::vector<std::string> bad = ensemble_violations(e);
    if (!bad.empty()) throw FormatError("invalid ensemble: " + bad.front());
    return e;
  });
}

std::string certificate_to_json(const Certificate& c) {
  json maps = json::array();
  for (const MapRecord& m : c.provenance.maps) {
    maps.push_back({{"role", m.role},
                    {"d_in", m.choi.d_in},
                    {"d_out", m.choi.d_out},
                    {"choi", matrix_json(m.choi.z)}});
  }
  json prov = {{"mode", c.provenance.mode},
               {"maps", maps},
               {"global_scale", c.provenance.global_scale},
               {"clipped", c.provenance.clipped},
               {"notes", c.provenance.notes}};
  prov["base"] = c.provenance.base ? ensemble_body(*c.provenance.base) : json(nullptr);
  json doc = {{"format", "sepcert-certificate"},
              {"version", kFormatVersion},
              {"target_hash", c.target_hash},
              {"dims", {c.dims.a, c.dims.b}},
              {"residual", c.residual},
              {"tolerance", c.tolerance},
              {"ensemble", ensemble_body(c.ensemble)},
              {"provenance", prov}};
  return doc.dump(1) + "\n";
}

Certificate certificate_from_json(const std::string& text) {
  return guarded([&] {
    const json doc = parse(text);
    expect_format(doc, "sepcert-certificate");
    Certificate c;
    c.target_hash = doc.at("target_hash").get<std::string>();
    c.dims = dims_from(doc.at("dims"));
    c.residual = doc.at("residual").get<double>();
    c.tolerance = doc.at("tolerance").get<double>();
    c.ensemble = ensemble_body_from(doc.at("ensemble"));
    const json& prov = doc.at("provenance");
    c.provenance.mode = prov.at("mode").get<std::string>();
    c.provenance.global_scale = prov.value("global_scale", 1.0);
    c.provenance.clipped = prov.value("clipped", 0.0);
    c.provenance.notes = prov.value("notes", std::vector<std::string>{});
    if (prov.contains("base") && !prov.at("base").is_null()) {
      c.provenance.base = ensemble_body_from(prov.at("base"));
    }
    for (const json& m : prov.at("maps")) {
      const Index din = m.at("d_in").get<Index>();
      const Index dout = m.at("d_out").get<Index>();
      c.provenance.maps.push_back(
          {m.at("role").get<std::string>(),
           ChoiMatrix{din, dout, matrix_from(m.at("choi"), din * dout, din * dout, "choi")}});
    }
    return c;
  });
}

std::string table_to_json(const BaseTable& t) {
  json entries = json::array();
  for (const TableEntry& e : t.entries) {
    json j = {{"ensemble", ensemble_body(e.ensemble)},
              {"digest", e.digest},
              {"sigma_min", e.sigma_min},
              {"seed", e.seed},
              {"status", e.pruned ? "pruned" : "active"}};
    if (e.pruned) j["pruned_by"] = e.pruned_by;
    entries.push_back(std::move(j));
  }
  json doc = {{"format", "sepcert-table"},
              {"version", kFormatVersion},
              {"dims", {t.dims.a, t.dims.b}},
              {"entries", entries}};
  return doc.dump(1) + "\n";
}

BaseTable table_from_json(const std::string& text) {
  return guarded([&] {
    const json doc = parse(text);
    expect_format(doc, "sepcert-table");
    BaseTable t;
    t.dims = dims_from(doc.at("dims"));
    for (const json& j : doc.at("entries")) {
      TableEntry e;
      e.ensemble = ensemble_body_from(j.at("ensemble"));
      if (e.ensemble.dims != t.dims) throw FormatError("table entry dimensions differ from table");
      e.digest = j.at("digest").get<std::string>();
      e.sigma_min = j.at("sigma_min").get<double>();
      e.seed = j.value("seed", std::uint64_t{0});
      const std::string status = j.value("status", "active");
      if (status != "active" && status != "pruned") throw FormatError("unknown entry status " + status);
      e.pruned = status == "pruned";
      e.pruned_by = j.value("pruned_by", "");
      const BipartiteState s = assemble(e.ensemble);
      if (content_digest(s.matrix(), s.dims()) != e.digest) {
        throw FormatError("table entry does not reassemble to its digest " + e.digest);
      }
      t.entries.push_back(std::move(e));
    }
    return t;
  });
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot write " + path);
  out << text;
  if (!out) throw FormatError("write failed for " + path);
}

}  // namespace sepcert
