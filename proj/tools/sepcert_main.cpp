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

// sepcert: separability detection, certificates and criteria from the shell.
//
// Exit codes: 0 separable / pass, 1 inconclusive / fail, 2 error.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "sepcert/certificate.hpp"
#include "sepcert/criteria.hpp"
#include "sepcert/detector.hpp"
#include "sepcert/io.hpp"
#include "sepcert/repro.hpp"

namespace {

using nlohmann::json;
using namespace sepcert;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitError = 2;
constexpr Index kMaxDim = 6;

class UsageError : public Error {
 public:
  using Error::Error;
};

struct Tolerances {
  double feas = kFeasibilityTol;
  double eq = kEqualityTol;
  double cert = kCertificateTol;
};

void guard_dims(Dims dims, bool allow_large) {
  if (!allow_large && (dims.a > kMaxDim || dims.b > kMaxDim)) {
    throw UsageError("local dimension above " + std::to_string(kMaxDim) +
                     " refused; pass --allow-large to override");
  }
}

std::string num(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

json tolerances_json(const Tolerances& t) {
  return {{"feas", t.feas}, {"eq", t.eq}, {"cert", t.cert}};
}

std::string tolerances_text(const Tolerances& t) {
  return "feas=" + num(t.feas) + " eq=" + num(t.eq) + " cert=" + num(t.cert);
}

json criterion_json(const CriterionReport& r) {
  json j = {{"name", r.name},
            {"verdict", to_string(r.verdict)},
            {"statistic", r.statistic},
            {"threshold", r.threshold}};
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

std::string ppt_advisory(const CriterionReport& r) {
  return r.verdict == CriterionVerdict::Entangled  ? "Entangled (PPT)"
         : r.verdict == CriterionVerdict::Separable ? "Separable (PPT)"
                                                    : "Inconclusive (PPT)";
}

// ---------------------------------------------------------------- detect

struct DetectArgs {
  std::string state;
  std::string base;
  std::string table;
  int random_bases = 8;
  std::uint64_t seed = 0;
  std::string enhanced = "on";
  bool no_analytical = false;
  int jobs = 1;
  std::string cert_out;
  bool as_json = false;
  bool allow_large = false;
  Tolerances tol;
};

int cmd_detect(const DetectArgs& a) {
  const StateFile sf = state_from_json(read_text_file(a.state));
  const BipartiteState& sigma = sf.state;
  guard_dims(sigma.dims(), a.allow_large);

  DetectorOptions opts;
  opts.eps_feas = a.tol.feas;
  opts.eps_eq = a.tol.eq;
  opts.cert_tol = a.tol.cert;
  const bool enhanced = a.enhanced == "on";

  DetectionOutcome out;
  if (!a.base.empty()) {
    const BaseState base = BaseState::from_ensemble(ensemble_from_json(read_text_file(a.base)));
    if (base.state.dims().a != sigma.dims().a) {
      throw UsageError("base A dimension differs from the target's");
    }
    out = detect_linear(base, sigma, opts);
    if (out.verdict != Verdict::Separable && enhanced && sigma.dims().a == sigma.dims().b &&
        base.state.dims() == sigma.dims()) {
      DetectionOutcome enh = detect_enhanced(base, sigma, opts);
      enh.diagnostics.notes.insert(enh.diagnostics.notes.begin(), out.diagnostics.notes.begin(),
                                   out.diagnostics.notes.end());
      out = std::move(enh);
    }
  } else {
    AutoPolicy policy;
    policy.analytical = !a.no_analytical;
    policy.n_bases = a.random_bases;
    policy.seed = a.seed;
    policy.enhanced = enhanced;
    policy.jobs = a.jobs;
    if (!a.table.empty()) {
      const BaseTable table = table_from_json(read_text_file(a.table));
      for (const TableEntry& e : table.entries) {
        if (!e.pruned) policy.table.push_back(BaseState::from_ensemble(e.ensemble));
      }
    }
    out = detect_auto(sigma, policy, opts);
  }

  std::optional<CriterionReport> ppt;
  if (sigma.dims().total() <= 6) ppt = ppt_check(sigma);

  if (out.certificate && !a.cert_out.empty()) {
    write_text_file(a.cert_out, certificate_to_json(*out.certificate));
  }

  const std::string digest = content_digest(sigma.matrix(), sigma.dims());
  if (a.as_json) {
    json j = {{"tool", "sepcert"},
              {"version", kVersion},
              {"command", "detect"},
              {"state", a.state},
              {"state_digest", digest},
              {"dims", {sigma.dims().a, sigma.dims().b}},
              {"seed", a.seed},
              {"tolerances", tolerances_json(a.tol)},
              {"verdict", to_string(out.verdict)},
              {"mode", to_string(out.mode)},
              {"margin", out.diagnostics.margin},
              {"equality_residual", out.diagnostics.equality_residual},
              {"notes", out.diagnostics.notes}};
    json trials = json::array();
    for (const TrialRecord& t : out.diagnostics.trials) {
      trials.push_back({{"index", t.index},
                        {"source", t.source},
                        {"mode", to_string(t.mode)},
                        {"verdict", to_string(t.verdict)},
                        {"sigma_min", t.sigma_min},
                        {"margin", t.margin},
                        {"note", t.note}});
    }
    j["trials"] = trials;
    if (out.certificate) {
      j["certificate"] = {{"terms", out.certificate->ensemble.size()},
                          {"residual", out.certificate->residual},
                          {"path", a.cert_out}};
    }
    if (ppt) j["ppt_advisory"] = criterion_json(*ppt);
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "sepcert " << kVersion << " detect\n";
    std::cout << "state: " << a.state << " dims=(" << sigma.dims().a << "," << sigma.dims().b
              << ") " << digest << "\n";
    std::cout << "seed: " << a.seed << "\n";
    std::cout << "tolerances: " << tolerances_text(a.tol) << "\n";
    std::cout << "verdict: " << to_string(out.verdict) << "\n";
    std::cout << "mode: " << to_string(out.mode) << "\n";
    if (!std::isnan(out.diagnostics.margin)) {
      std::cout << "margin: " << num(out.diagnostics.margin) << "\n";
    }
    for (const TrialRecord& t : out.diagnostics.trials) {
      std::cout << "trial " << t.index << ": " << t.source << " " << to_string(t.mode) << " "
                << to_string(t.verdict);
      if (!t.note.empty()) std::cout << " (" << t.note << ")";
      std::cout << "\n";
    }
    for (const std::string& n : out.diagnostics.notes) std::cout << "note: " << n << "\n";
    if (out.certificate) {
      std::cout << "certificate: " << out.certificate->ensemble.size() << " terms, residual "
                << num(out.certificate->residual);
      if (!a.cert_out.empty()) std::cout << ", written to " << a.cert_out;
      std::cout << "\n";
    }
    if (ppt) {
      std::cout << "ppt advisory: " << ppt_advisory(*ppt) << " statistic " << num(ppt->statistic)
                << "\n";
    }
  }
  return out.verdict == Verdict::Separable ? kExitPass : kExitFail;
}

// ---------------------------------------------------------------- criterion

int cmd_criterion(const std::string& which, const std::string& path, bool as_json,
                  bool allow_large) {
  const StateFile sf = state_from_json(read_text_file(path));
  guard_dims(sf.state.dims(), allow_large);
  CriterionReport r;
  if (which == "eig") {
    r = corollary1_check(sf.state);
  } else if (which == "gb") {
    r = gurvits_barnum_check(sf.state);
  } else {
    r = ppt_check(sf.state);
  }
  if (as_json) {
    json j = criterion_json(r);
    j["version"] = kVersion;
    j["state"] = path;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "sepcert " << kVersion << " criterion " << r.name << "\n";
    std::cout << "state: " << path << "\n";
    std::cout << "verdict: " << to_string(r.verdict) << "\n";
    std::cout << "statistic: " << num(r.statistic) << "\n";
    std::cout << "threshold: " << num(r.threshold) << "\n";
    if (!r.note.empty()) std::cout << "note: " << r.note << "\n";
  }
  return r.verdict == CriterionVerdict::Separable ? kExitPass : kExitFail;
}

// ---------------------------------------------------------------- verify

int cmd_verify(const std::string& cert_path, const std::string& state_path, double tol,
               bool as_json) {
  const Certificate cert = certificate_from_json(read_text_file(cert_path));
  const StateFile sf = state_from_json(read_text_file(state_path));
  VerifyTolerances vt;
  vt.residual = tol;
  const VerificationReport rep = verify_certificate(cert, sf.state, vt);
  if (as_json) {
    std::cout << json{{"version", kVersion},
                      {"valid", rep.valid},
                      {"residual", rep.residual},
                      {"weight_sum", rep.weight_sum},
                      {"min_factor_eigenvalue", rep.min_factor_eigenvalue},
                      {"tolerance", tol},
                      {"failures", rep.failures}}
                     .dump(2)
              << "\n";
  } else {
    std::cout << "sepcert " << kVersion << " verify\n";
    std::cout << "result: " << (rep.valid ? "valid" : "invalid") << "\n";
    std::cout << "terms: " << cert.ensemble.size() << "\n";
    std::cout << "residual: " << num(rep.residual) << " (tolerance " << num(tol) << ")\n";
    std::cout << "weight sum: " << num(rep.weight_sum) << "\n";
    std::cout << "min factor eigenvalue: " << num(rep.min_factor_eigenvalue) << "\n";
    for (const std::string& f : rep.failures) std::cout << "failure: " << f << "\n";
  }
  return rep.valid ? kExitPass : kExitFail;
}

// ---------------------------------------------------------------- gen

struct GenArgs {
  std::string kind;
  Index d = 2;
  Index da = 2;
  Index db = 2;
  double lambda = 0.0;
  double eps = 0.0;
  Index terms = 5;
  std::uint64_t seed = 0;
  std::string mix_a;
  std::string mix_b;
  double p = 0.5;
  std::string out;
  std::string ensemble_out;
  std::string label;
  bool allow_large = false;
};

int cmd_gen(const GenArgs& a) {
  StateMeta meta;
  std::optional<BipartiteState> state;
  if (a.kind == "isotropic") {
    guard_dims({a.d, a.d}, a.allow_large);
    state = isotropic_state(a.d, a.lambda);
    meta.label = "isotropic d=" + std::to_string(a.d) + " lambda=" + num(a.lambda);
  } else if (a.kind == "sigma-eps") {
    guard_dims({a.d, a.d}, a.allow_large);
    state = sigma_epsilon(a.d, a.eps);
    meta.label = "sigma-eps d=" + std::to_string(a.d) + " eps=" + num(a.eps);
  } else if (a.kind == "random-sep") {
    guard_dims({a.da, a.db}, a.allow_large);
    const ProductEnsemble e = random_separable(a.da, a.db, a.terms, a.seed);
    meta.label = "random-sep terms=" + std::to_string(a.terms);
    meta.seed = a.seed;
    state = assemble(e);
    if (!a.ensemble_out.empty()) write_text_file(a.ensemble_out, ensemble_to_json(e, meta));
  } else {
    if (a.mix_a.empty() || a.mix_b.empty()) throw UsageError("mix needs --a and --b state files");
    if (a.p < 0.0 || a.p > 1.0) throw UsageError("--p must lie in [0, 1]");
    const StateFile sa = state_from_json(read_text_file(a.mix_a));
    const StateFile sb = state_from_json(read_text_file(a.mix_b));
    if (sa.state.dims() != sb.state.dims()) throw UsageError("mixed states differ in dimensions");
    state = BipartiteState::from_matrix(a.p * sa.state.matrix() + (1.0 - a.p) * sb.state.matrix(),
                                        sa.state.dims());
    meta.label = "mix p=" + num(a.p);
  }
  if (!a.label.empty()) meta.label = a.label;
  const std::string text = state_to_json(*state, meta);
  if (a.out.empty() || a.out == "-") {
    std::cout << text;
  } else {
    write_text_file(a.out, text);
  }
  return kExitPass;
}

// ---------------------------------------------------------------- table

struct TableArgs {
  std::string action;
  std::string path;
  std::string ensemble;
  bool random = false;
  Index d = 2;
  Index terms = 0;
  int count = 1;
  std::uint64_t seed = 0;
};

BaseTable load_or_empty(const std::string& path, Dims dims) {
  if (std::filesystem::exists(path)) return table_from_json(read_text_file(path));
  BaseTable t;
  t.dims = dims;
  return t;
}

int cmd_table(const TableArgs& a) {
  if (a.action == "list") {
    const BaseTable t = table_from_json(read_text_file(a.path));
    std::cout << "sepcert " << kVersion << " table " << a.path << " dims=(" << t.dims.a << ","
              << t.dims.b << ") entries=" << t.entries.size() << "\n";
    for (std::size_t i = 0; i < t.entries.size(); ++i) {
      const TableEntry& e = t.entries[i];
      std::cout << i << " " << (e.pruned ? "pruned" : "active") << " terms="
                << e.ensemble.size() << " sigma_min=" << num(e.sigma_min) << " seed=" << e.seed
                << " " << e.digest;
      if (e.pruned) std::cout << " by " << e.pruned_by;
      std::cout << "\n";
    }
    return kExitPass;
  }
  if (a.action == "prune") {
    BaseTable t = table_from_json(read_text_file(a.path));
    const std::size_t before = std::count_if(t.entries.begin(), t.entries.end(),
                                             [](const TableEntry& e) { return !e.pruned; });
    PruneOptions po;
    po.seed = a.seed;
    t.entries = table_prune(std::move(t.entries), po);
    const std::size_t after = std::count_if(t.entries.begin(), t.entries.end(),
                                            [](const TableEntry& e) { return !e.pruned; });
    write_text_file(a.path, table_to_json(t));
    std::cout << "pruned " << before - after << " of " << before << " active entries\n";
    return kExitPass;
  }

  // add
  std::vector<std::pair<ProductEnsemble, std::uint64_t>> candidates;
  if (!a.ensemble.empty()) {
    candidates.emplace_back(ensemble_from_json(read_text_file(a.ensemble)), 0);
  } else if (a.random) {
    const Index n = a.terms > 0 ? a.terms : a.d * a.d + 1;
    for (int k = 0; k < a.count; ++k) {
      const std::uint64_t s = trial_seed(a.seed, k);
      candidates.emplace_back(random_separable(a.d, a.d, n, s), s);
    }
  } else {
    throw UsageError("table add needs --ensemble PATH or --random");
  }
  BaseTable t = load_or_empty(a.path, candidates.front().first.dims);
  int rejected = 0;
  for (auto& [e, seed] : candidates) {
    if (e.dims != t.dims) throw UsageError("ensemble dimensions differ from the table's");
    const BipartiteState s = assemble(e);
    const FaithfulnessReport f = is_faithful(s);
    if (!f.faithful) {
      std::cout << "rejected: not faithful (sigma_min " << num(f.sigma_min) << ")\n";
      ++rejected;
      continue;
    }
    TableEntry entry;
    entry.ensemble = std::move(e);
    entry.digest = content_digest(s.matrix(), s.dims());
    entry.sigma_min = f.sigma_min;
    entry.seed = seed;
    std::cout << "added entry " << t.entries.size() << " sigma_min=" << num(f.sigma_min) << " "
              << entry.digest << "\n";
    t.entries.push_back(std::move(entry));
  }
  if (rejected < static_cast<int>(candidates.size())) write_text_file(a.path, table_to_json(t));
  return rejected == 0 ? kExitPass : kExitFail;
}

// ---------------------------------------------------------------- repro

int cmd_repro(std::uint64_t seed, int jobs) {
  AcceptanceOptions o;
  o.seed = seed;
  o.jobs = jobs;
  std::cout << "sepcert " << kVersion << " repro seed=" << seed << "\n";
  bool all = true;
  for (auto check : {accept_gb_gap, accept_isotropic_boundary, accept_constructive_certificate,
                     accept_roundtrip_detection, accept_no_false_positives, accept_faithfulness,
                     accept_solver_contract, accept_coverage_report}) {
    const AcceptanceResult r = check(o);
    std::cout << format_acceptance(r) << std::endl;
    all = all && r.pass;
  }
  return all ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sepcert: certify separability of bipartite quantum states"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  DetectArgs det;
  auto* detect = app.add_subcommand("detect", "search for a local map from a separable base");
  detect->add_option("state", det.state, "state file")->required()->check(CLI::ExistingFile);
  auto* base_opt = detect->add_option("--base", det.base, "ensemble file used as the only base")
                       ->check(CLI::ExistingFile);
  detect->add_option("--table", det.table, "base table file")
      ->check(CLI::ExistingFile)
      ->excludes(base_opt);
  detect->add_option("--random-bases", det.random_bases, "random faithful bases to try")
      ->check(CLI::NonNegativeNumber);
  detect->add_option("--seed", det.seed, "seed for random bases");
  detect->add_option("--enhanced", det.enhanced, "use the two-sided map")
      ->check(CLI::IsMember({"on", "off"}));
  detect->add_flag("--no-analytical", det.no_analytical, "skip the eigenvalue criterion");
  detect->add_option("--jobs", det.jobs, "parallel base trials")->check(CLI::PositiveNumber);
  detect->add_option("--cert-out", det.cert_out, "write the certificate here");
  detect->add_option("--tol-feas", det.tol.feas, "relative feasibility margin");
  detect->add_option("--tol-eq", det.tol.eq, "relative equality residual");
  detect->add_option("--tol-cert", det.tol.cert, "certificate residual");
  detect->add_flag("--json", det.as_json, "machine-readable report");
  detect->add_flag("--allow-large", det.allow_large, "permit local dimensions above 6");

  std::string crit_which;
  std::string crit_state;
  bool crit_json = false;
  bool crit_large = false;
  auto* criterion = app.add_subcommand("criterion", "evaluate an analytical criterion");
  criterion->add_option("which", crit_which, "eig | gb | ppt")
      ->required()
      ->check(CLI::IsMember({"eig", "gb", "ppt"}));
  criterion->add_option("state", crit_state, "state file")->required()->check(CLI::ExistingFile);
  criterion->add_flag("--json", crit_json, "machine-readable report");
  criterion->add_flag("--allow-large", crit_large, "permit local dimensions above 6");

  std::string ver_cert;
  std::string ver_state;
  double ver_tol = kCertificateTol;
  bool ver_json = false;
  auto* verify = app.add_subcommand("verify", "check a certificate against a state");
  verify->add_option("certificate", ver_cert, "certificate file")
      ->required()
      ->check(CLI::ExistingFile);
  verify->add_option("state", ver_state, "state file")->required()->check(CLI::ExistingFile);
  verify->add_option("--tol-cert", ver_tol, "residual tolerance");
  verify->add_flag("--json", ver_json, "machine-readable report");

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "generate states");
  gen_cmd->add_option("kind", gen.kind, "isotropic | random-sep | sigma-eps | mix")
      ->required()
      ->check(CLI::IsMember({"isotropic", "random-sep", "sigma-eps", "mix"}));
  gen_cmd->add_option("--d", gen.d, "local dimension (isotropic, sigma-eps)");
  gen_cmd->add_option("--da", gen.da, "A dimension (random-sep)");
  gen_cmd->add_option("--db", gen.db, "B dimension (random-sep)");
  gen_cmd->add_option("--lambda", gen.lambda, "isotropic weight");
  gen_cmd->add_option("--eps", gen.eps, "sigma-eps parameter");
  gen_cmd->add_option("--terms", gen.terms, "product terms (random-sep)");
  gen_cmd->add_option("--seed", gen.seed, "seed (random-sep)");
  gen_cmd->add_option("--a", gen.mix_a, "first state (mix)");
  gen_cmd->add_option("--b", gen.mix_b, "second state (mix)");
  gen_cmd->add_option("--p", gen.p, "weight of the first state (mix)");
  gen_cmd->add_option("--out,-o", gen.out, "output state file (default stdout)");
  gen_cmd->add_option("--ensemble-out", gen.ensemble_out, "also write the ensemble (random-sep)");
  gen_cmd->add_option("--label", gen.label, "override the stored label");
  gen_cmd->add_flag("--allow-large", gen.allow_large, "permit local dimensions above 6");

  TableArgs tab;
  auto* table = app.add_subcommand("table", "maintain a table of faithful bases");
  table->add_option("action", tab.action, "add | prune | list")
      ->required()
      ->check(CLI::IsMember({"add", "prune", "list"}));
  table->add_option("table", tab.path, "table file")->required();
  table->add_option("--ensemble", tab.ensemble, "ensemble file to add")->check(CLI::ExistingFile);
  table->add_flag("--random", tab.random, "add random separable bases");
  table->add_option("--d", tab.d, "local dimension for --random");
  table->add_option("--terms", tab.terms, "terms per random base (default d^2 + 1)");
  table->add_option("--count", tab.count, "number of random bases")->check(CLI::PositiveNumber);
  table->add_option("--seed", tab.seed, "seed for --random and pruning samples");

  std::uint64_t repro_seed = AcceptanceOptions{}.seed;
  int repro_jobs = 1;
  auto* repro = app.add_subcommand("repro", "run the acceptance criteria");
  repro->add_option("--seed", repro_seed, "suite seed");
  repro->add_option("--jobs", repro_jobs, "parallel base trials")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitError;
  }

  try {
    if (*detect) return cmd_detect(det);
    if (*criterion) return cmd_criterion(crit_which, crit_state, crit_json, crit_large);
    if (*verify) return cmd_verify(ver_cert, ver_state, ver_tol, ver_json);
    if (*gen_cmd) return cmd_gen(gen);
    if (*table) {
      if (tab.action != "add" && !std::filesystem::exists(tab.path)) {
        throw UsageError("no such table: " + tab.path);
      }
      return cmd_table(tab);
    }
    if (*repro) return cmd_repro(repro_seed, repro_jobs);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
