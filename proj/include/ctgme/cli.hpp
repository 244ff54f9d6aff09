// Copyright 2026 The ctgme Authors
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
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "ctgme/random.hpp"
#include "ctgme/report.hpp"
#include "ctgme/selftest.hpp"

namespace ctgme::cli {

#ifndef CTGME_FIXTURE_DIR
#define CTGME_FIXTURE_DIR "fixtures"
#endif

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitInternal = 2;

inline std::filesystem::path fixture_dir() {
  if (const char* env = std::getenv("CTGME_FIXTURE_DIR"); env != nullptr && *env != '\0') return env;
  return CTGME_FIXTURE_DIR;
}

/// --seed wins over GME_SEED.
inline std::optional<std::uint64_t> resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return flag;
  const char* env = std::getenv("GME_SEED");
  if (env == nullptr || *env == '\0') return std::nullopt;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (end == env || *end != '\0') fail(ErrorKind::invalid_argument, std::string("GME_SEED is not an unsigned integer: ") + env);
  return v;
}

inline Dims parse_dims(const std::string& text) {
  Dims dims;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    char* end = nullptr;
    const long v = std::strtol(item.c_str(), &end, 10);
    if (item.empty() || *end != '\0' || v < 2) fail(ErrorKind::invalid_argument, "--dims: expected integers >= 2, got '" + text + "'");
    dims.push_back(static_cast<int>(v));
  }
  if (dims.empty()) fail(ErrorKind::invalid_argument, "--dims is empty");
  detail::checked_dimension(dims);
  return dims;
}

struct Tolerances {
  double validation;
  double edge;
  double rank;
  double reconstruction;
};

/// Maps --tol (or the document's declared tolerance) onto the individual checks.
inline Tolerances tolerances_for(std::optional<double> flag, const StateDocument& doc) {
  const std::optional<double> t = flag ? flag : doc.declared_tolerance;
  return Tolerances{t.value_or(kDefaultTol), t.value_or(kDefaultProductTol), t ? 0.1 * *t : 1e-9,
                    std::max(1e-6, t.value_or(0.0))};
}

inline PureState require_pure(const StateDocument& doc, double rank_tol, std::vector<std::string>& notices) {
  if (doc.is_pure()) return std::get<PureState>(doc.state);
  const DensityMatrix& rho = std::get<DensityMatrix>(doc.state);
  const EigenSystem es = hermitian_eig(rho);
  int rank = 0;
  while (rank < es.values.size() && es.values(rank) > rank_tol) ++rank;
  if (rank != 1) {
    fail(ErrorKind::validation, "mixed input has rank " + std::to_string(rank) + " at tolerance " + detail::fmt_double(rank_tol) +
                                    "; this command needs a pure state (use witness or convex-roof)");
  }
  notices.push_back("rank-1 mixed input projected onto its dominant eigenvector (eigenvalue " + detail::fmt_double(es.values(0)) + ")");
  return PureState::normalized(rho.dims(), es.vectors.col(0));
}

inline DensityMatrix as_density(const StateDocument& doc) {
  if (doc.is_pure()) return DensityMatrix::from_pure(std::get<PureState>(doc.state));
  return std::get<DensityMatrix>(doc.state);
}

inline EdgeConvention convention_of(const std::string& name) {
  const auto c = parse_convention(name);
  if (!c) fail(ErrorKind::invalid_argument, "unknown convention '" + name + "'");
  return *c;
}

inline std::string yes_no(bool b) { return b ? "yes" : "no"; }

struct Options {
  std::string file;
  std::string convention = "concurrence";
  std::optional<double> tol;
  bool json = false;
  std::optional<std::uint64_t> seed;
  int restarts = 32;
  std::optional<int> ensemble_size;
  std::string dims;
  std::string out_path;
  int trials = 100;
};

inline int cmd_analyze(const Options& o, std::ostream& out) {
  const StateDocument doc = parse_state_file(o.file, o.tol);
  const Tolerances t = tolerances_for(o.tol, doc);
  std::vector<std::string> notices;
  const PureState psi = require_pure(doc, t.rank, notices);
  AnalysisReport r = analyze_state(psi, {convention_of(o.convention), t.edge, t.reconstruction}, doc.digest);
  r.notices.insert(r.notices.begin(), notices.begin(), notices.end());
  out << emit_report(r, o.json);
  return kExitOk;
}

inline int cmd_witness(const Options& o, std::ostream& out) {
  const StateDocument doc = parse_state_file(o.file, o.tol);
  const Tolerances t = tolerances_for(o.tol, doc);
  const WitnessResult w = witness(as_density(doc), convention_of(o.convention), t.rank);
  if (o.json) {
    const Json j{{"tool_version", kToolVersion},
                 {"input_digest", doc.digest},
                 {"convention", to_string(w.convention)},
                 {"value", round_sig10(w.value)},
                 {"rank", w.rank},
                 {"pure_bypass", w.pure_bypass},
                 {"gme_detected", w.gme_detected},
                 {"gme", gme_json(w.report)}};
    out << j.dump(2) << "\n";
  } else {
    out << kToolVersion << "\n";
    out << "input digest: " << doc.digest << "\n";
    out << "convention: " << to_string(w.convention) << "\n";
    out << "purification rank: " << w.rank << (w.pure_bypass ? " (evaluated on the pure state)" : "") << "\n";
    out << "witness = " << fixed6(w.value) << "\n";
    out << "GME detected: " << yes_no(w.gme_detected) << "\n";
  }
  return kExitOk;
}

inline int cmd_convex_roof(const Options& o, std::ostream& out) {
  const StateDocument doc = parse_state_file(o.file, o.tol);
  const Tolerances t = tolerances_for(o.tol, doc);
  ConvexRoofConfig cfg;
  cfg.restarts = o.restarts;
  cfg.seed = resolve_seed(o.seed).value_or(0);
  cfg.rank_tol = t.rank;
  if (o.ensemble_size) cfg.ensemble_sizes = {*o.ensemble_size};
  const ConvexRoofResult r = convex_roof_upper_bound(as_density(doc), convention_of(o.convention), cfg);
  if (o.json) {
    Json members = Json::array();
    for (std::size_t i = 0; i < r.best.size(); ++i) {
      members.push_back({{"weight", round_sig10(r.best.weights[i])}, {"f", round_sig10(gme_value(r.best.states[i], r.convention))}});
    }
    Json history = Json::array();
    for (double v : r.best_history) history.push_back(round_sig10(v));
    const Json j{{"tool_version", kToolVersion},
                 {"input_digest", doc.digest},
                 {"convention", to_string(r.convention)},
                 {"seed", cfg.seed},
                 {"restarts", cfg.restarts},
                 {"rank", r.rank},
                 {"upper_bound", round_sig10(r.value)},
                 {"spectral_value", round_sig10(r.spectral_value)},
                 {"ensemble_size", r.best_ensemble_size},
                 {"members", std::move(members)},
                 {"best_history", std::move(history)}};
    out << j.dump(2) << "\n";
  } else {
    out << kToolVersion << "\n";
    out << "input digest: " << doc.digest << "\n";
    out << "convention: " << to_string(r.convention) << "\n";
    out << "seed: " << cfg.seed << "\n";
    out << "rank: " << r.rank << "\n";
    out << "spectral ensemble value = " << fixed6(r.spectral_value) << "\n";
    out << "convex-roof upper bound = " << fixed6(r.value) << "  (ensemble size " << r.best_ensemble_size << ")\n";
    for (std::size_t i = 0; i < r.best.size(); ++i) {
      out << "  p = " << fixed6(r.best.weights[i]) << "  F = " << fixed6(gme_value(r.best.states[i], r.convention)) << "\n";
    }
  }
  return kExitOk;
}

inline int cmd_classify(const Options& o, std::ostream& out) {
  const StateDocument doc = parse_state_file(o.file, o.tol);
  const Tolerances t = tolerances_for(o.tol, doc);
  std::vector<std::string> notices;
  const PureState psi = require_pure(doc, t.rank, notices);
  const Factorization f = finest_factorization(psi, t.edge, t.reconstruction);
  if (o.json) {
    Json j = factorization_json(f);
    j["tool_version"] = kToolVersion;
    j["input_digest"] = doc.digest;
    j["notices"] = notices;
    out << j.dump(2) << "\n";
    return kExitOk;
  }
  out << "factors:";
  for (PartySet s : f.factors) out << " " << s.to_string();
  out << "\nGME: " << yes_no(f.is_gme) << "\n";
  for (const CutValue& c : f.product_cuts) out << "product cut " << c.cut.to_string() << "  C = " << detail::fmt_double(c.concurrence) << "\n";
  out << "reconstruction error: " << detail::fmt_double(f.reconstruction_error) << "\n";
  for (const std::string& n : notices) out << "notice: " << n << "\n";
  return kExitOk;
}

inline int cmd_random(const Options& o, std::ostream& out) {
  const Dims dims = parse_dims(o.dims);
  const auto seed = resolve_seed(o.seed);
  if (!seed) fail(ErrorKind::invalid_argument, "random needs --seed or GME_SEED");
  const PureState psi = haar_random_pure(dims, *seed);
  const std::string text = emit_state_document(psi, Json{{"generator", "haar"}, {"seed", *seed}});
  if (o.out_path.empty()) {
    out << text;
  } else {
    std::ofstream f(o.out_path, std::ios::binary);
    if (!f || !(f << text)) fail(ErrorKind::invalid_argument, "cannot write " + o.out_path);
  }
  return kExitOk;
}

inline int cmd_check_inequalities(const Options& o, std::ostream& out) {
  const Dims dims = parse_dims(o.dims);
  const auto seed = resolve_seed(o.seed);
  if (!seed) fail(ErrorKind::invalid_argument, "check-inequalities needs --seed or GME_SEED");
  if (o.trials < 1) fail(ErrorKind::invalid_argument, "--trials must be positive");
  if (dims.size() < 3) fail(ErrorKind::invalid_argument, "check-inequalities needs at least three parties");

  struct Family {
    const char* name;
    double min = std::numeric_limits<double>::infinity();
    int violations = 0;
    void add(double s) {
      min = std::min(min, s);
      if (s < -PolygamyReport::kSlackTol) ++violations;
    }
  };
  Family sq{"squared sum"}, lin{"plain sum"}, pair{"pair triangle"}, ent{"linear entropy"};
  Rng rng(*seed);
  for (int k = 0; k < o.trials; ++k) {
    const PolygamyReport rep = check_polygamy(haar_random_pure(dims, rng));
    for (const auto& s : rep.squared_sum) sq.add(s.slack);
    for (const auto& s : rep.plain_sum) lin.add(s.slack);
    for (const auto& s : rep.pair_triangles) pair.add(std::min(s.pair_bound, s.single_bound));
    for (const auto& s : rep.linear_entropy) ent.add(std::min(s.lower, s.upper));
  }
  int total = 0;
  out << "trials: " << o.trials << "  seed: " << *seed << "\n";
  for (const Family* f : {&sq, &lin, &pair, &ent}) {
    out << f->name << ": min slack " << detail::fmt_double(f->min) << ", violations " << f->violations << "\n";
    total += f->violations;
  }
  out << (total == 0 ? "all inequalities hold\n" : "INEQUALITY VIOLATED\n");
  return total == 0 ? kExitOk : kExitInternal;
}

inline int cmd_selftest(const Options& o, std::ostream& out) {
  const std::uint64_t seed = resolve_seed(o.seed).value_or(20260101);
  int failed = 0;
  selftest::run_all(fixture_dir(), seed, [&](const selftest::CheckResult& r) {
    out << (r.passed ? "PASS " : "FAIL ") << r.name;
    if (!r.detail.empty()) out << "  [" << r.detail << "]";
    out << "\n" << std::flush;
    if (!r.passed) ++failed;
  });
  out << (failed == 0 ? "selftest passed\n" : "selftest: " + std::to_string(failed) + " check(s) failed\n");
  return failed == 0 ? kExitOk : kExitInternal;
}

/// Runs one command. `args` excludes the program name.
inline int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Concurrence-triangle GME measures", "ctgme"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);
  Options o;

  auto add_convention = [&o](CLI::App* c) {
    c->add_option("--convention", o.convention, "Edge convention")->check(CLI::IsMember({"concurrence", "squared"}));
  };
  auto add_file = [&o](CLI::App* c) { c->add_option("file", o.file, "State document")->required(); };

  CLI::App* analyze = app.add_subcommand("analyze", "Cut concurrences, F_N and factorization of a pure state");
  add_file(analyze);
  add_convention(analyze);
  analyze->add_option("--tol", o.tol, "Numerical tolerance");
  analyze->add_flag("--json", o.json, "Emit JSON");

  CLI::App* wit = app.add_subcommand("witness", "GME witness of a mixed state via its minimal purification");
  add_file(wit);
  add_convention(wit);
  wit->add_option("--tol", o.tol, "Numerical tolerance");
  wit->add_flag("--json", o.json, "Emit JSON");

  CLI::App* roof = app.add_subcommand("convex-roof", "Upper bound on the convex-roof measure");
  add_file(roof);
  add_convention(roof);
  roof->add_option("--restarts", o.restarts, "Random restarts per ensemble size")->check(CLI::PositiveNumber);
  roof->add_option("--seed", o.seed, "Random seed");
  roof->add_option("--ensemble-size", o.ensemble_size, "Ensemble size (default: rank, rank+1, rank+2)");
  roof->add_flag("--json", o.json, "Emit JSON");

  CLI::App* classify = app.add_subcommand("classify", "Finest product factorization of a pure state");
  add_file(classify);
  classify->add_option("--tol", o.tol, "Product-cut tolerance");
  classify->add_flag("--json", o.json, "Emit JSON");

  CLI::App* rnd = app.add_subcommand("random", "Haar-random pure state as a state document");
  rnd->add_option("--dims", o.dims, "Local dimensions, comma separated")->required();
  rnd->add_option("--seed", o.seed, "Random seed");
  rnd->add_option("--out", o.out_path, "Output file (default: stdout)");

  CLI::App* ineq = app.add_subcommand("check-inequalities", "Polygamy inequalities over Haar samples");
  ineq->add_option("--dims", o.dims, "Local dimensions, comma separated")->required();
  ineq->add_option("--trials", o.trials, "Number of samples");
  ineq->add_option("--seed", o.seed, "Random seed");

  CLI::App* self = app.add_subcommand("selftest", "Full property campaign");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    const CLI::App* active = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    err << active->help();
    return kExitInput;
  }

  try {
    if (analyze->parsed()) return cmd_analyze(o, out);
    if (wit->parsed()) return cmd_witness(o, out);
    if (roof->parsed()) return cmd_convex_roof(o, out);
    if (classify->parsed()) return cmd_classify(o, out);
    if (rnd->parsed()) return cmd_random(o, out);
    if (ineq->parsed()) return cmd_check_inequalities(o, out);
    if (self->parsed()) return cmd_selftest(o, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.kind() == ErrorKind::internal ? kExitInternal : kExitInput;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInput;
}

}  // namespace ctgme::cli
