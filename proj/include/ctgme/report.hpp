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

#include <cstdio>
#include <cstdlib>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ctgme/concurrence.hpp"
#include "ctgme/mixed_gme.hpp"
#include "ctgme/state_document.hpp"
#include "ctgme/structure_classifier.hpp"
#include "ctgme/triangle_gme.hpp"

namespace ctgme {

inline constexpr const char* kToolVersion = "ctgme 0.1.0";

/// Rounds to 10 significant digits so JSON output does not depend on the
/// last few bits of floating-point noise.
inline double round_sig10(double x) {
  if (!std::isfinite(x) || x == 0.0) return x == 0.0 ? 0.0 : x;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9e", x);
  return std::strtod(buf, nullptr);
}

inline std::string fixed6(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

inline Json parties_json(PartySet s) {
  Json a = Json::array();
  for (int p : s.members()) a.push_back(p + 1);
  return a;
}

inline std::string triangle_label(const TriangleRecord& t) {
  auto side = [](PartySet s) { return s.size() == 1 ? std::to_string(s.lowest() + 1) : s.to_string(); };
  return side(t.edges.x) + "|" + side(t.edges.y);
}

inline Json triangle_json(const TriangleRecord& t) {
  Json j{{"label", triangle_label(t)},
         {"level", t.level},
         {"vertices", Json::array({parties_json(t.edges.x), parties_json(t.edges.y), parties_json(t.edges.z)})},
         {"edges", Json::array({round_sig10(t.edges.a), round_sig10(t.edges.b), round_sig10(t.edges.c)})},
         {"area", round_sig10(t.area)},
         {"zero", t.zero}};
  if (t.zero_edge >= 0) {
    const PartySet v = t.zero_edge == 0 ? t.edges.x : (t.zero_edge == 1 ? t.edges.y : t.edges.z);
    j["zero_edge"] = parties_json(v);
  } else {
    j["zero_edge"] = nullptr;
  }
  return j;
}

inline Json gme_json(const GmeReport& g) {
  Json levels = Json::array();
  for (const LevelValue& l : g.levels) {
    levels.push_back({{"level", l.level}, {"value", round_sig10(l.value)}, {"triangles", l.num_triangles}});
  }
  Json tris = Json::array();
  for (const TriangleRecord& t : g.triangles) tris.push_back(triangle_json(t));
  Json zeros = Json::array();
  for (std::size_t k : g.zero_triangles) zeros.push_back(triangle_json(g.triangles[k]));
  return Json{{"convention", to_string(g.convention)},
              {"f_total", round_sig10(g.f_total)},
              {"levels", std::move(levels)},
              {"triangles", std::move(tris)},
              {"zero_triangles", std::move(zeros)},
              {"exceeds_unit", g.exceeds_unit},
              {"is_gme", g.is_gme()},
              {"tolerances", {{"area", g.tolerances.area}, {"edge", g.tolerances.edge}}}};
}

inline Json cut_values_json(const std::vector<CutValue>& cuts) {
  Json a = Json::array();
  for (const CutValue& c : cuts) {
    a.push_back({{"cut", c.cut.to_string()}, {"concurrence", round_sig10(c.concurrence)}});
  }
  return a;
}

inline Json factorization_json(const Factorization& f) {
  Json factors = Json::array();
  for (PartySet s : f.factors) factors.push_back(parties_json(s));
  return Json{{"factors", std::move(factors)},
              {"is_gme", f.is_gme},
              {"product_cuts", cut_values_json(f.product_cuts)},
              {"marginal_cuts", cut_values_json(f.marginal_cuts)},
              {"reconstruction_error", round_sig10(f.reconstruction_error)}};
}

struct AnalysisReport {
  std::string input_digest;
  std::optional<std::uint64_t> seed;
  Dims dims;
  std::vector<CutValue> cut_table;
  GmeReport gme;
  std::optional<Factorization> factorization;
  std::vector<std::string> notices;
};

struct AnalyzeOptions {
  EdgeConvention convention = EdgeConvention::concurrence;
  double edge_tol = kDefaultProductTol;
  double reconstruction_tol = 1e-6;
};

inline AnalysisReport analyze_state(const PureState& psi, const AnalyzeOptions& opt, std::string digest = {}) {
  AnalysisReport r;
  r.input_digest = std::move(digest);
  r.dims = psi.dims();
  const CutConcurrenceTable table = all_cut_concurrences(psi, psi.num_parties() / 2);
  for (const auto& [cut, c] : table.entries()) r.cut_table.push_back({cut, c});
  r.gme = f_total(psi, opt.convention, GmeTolerances{1e-8, opt.edge_tol});
  if (psi.num_parties() <= kClassifierMaxParties) {
    r.factorization = finest_factorization(psi, opt.edge_tol, opt.reconstruction_tol);
  } else {
    r.notices.push_back("factorization skipped: more than " + std::to_string(kClassifierMaxParties) + " parties");
  }
  if (r.gme.exceeds_unit) r.notices.push_back("F exceeds 1: normalization bound does not hold for this state");
  for (const CutValue& cv : r.factorization ? r.factorization->marginal_cuts : std::vector<CutValue>{}) {
    r.notices.push_back("marginal cut " + cv.cut.to_string() + ": concurrence " + detail::fmt_double(cv.concurrence) +
                        " is within a factor of 10 of the tolerance");
  }
  return r;
}

inline Json report_to_json(const AnalysisReport& r) {
  Json j{{"tool_version", kToolVersion},
         {"input_digest", r.input_digest},
         {"dims", r.dims},
         {"convention", to_string(r.gme.convention)},
         {"cut_concurrences", cut_values_json(r.cut_table)},
         {"gme", gme_json(r.gme)},
         {"f_total", round_sig10(r.gme.f_total)},
         {"notices", r.notices}};
  j["seed"] = r.seed ? Json(*r.seed) : Json(nullptr);
  j["factorization"] = r.factorization ? factorization_json(*r.factorization) : Json(nullptr);
  return j;
}

inline std::string emit_report(const AnalysisReport& r, bool json) {
  if (json) return report_to_json(r).dump(2) + "\n";
  std::ostringstream os;
  os << kToolVersion << "\n";
  os << "input digest: " << r.input_digest << "\n";
  os << "dims: [";
  for (std::size_t k = 0; k < r.dims.size(); ++k) os << (k ? "," : "") << r.dims[k];
  os << "]\nconvention: " << to_string(r.gme.convention) << "\n\n";
  os << "cut concurrences:\n";
  for (const CutValue& c : r.cut_table) os << "  C" << c.cut.to_string() << " = " << fixed6(c.concurrence) << "\n";
  os << "\n";
  for (const LevelValue& l : r.gme.levels) {
    os << "F_" << r.gme.num_parties << "^(" << l.level << ") = " << fixed6(l.value) << "  (" << l.num_triangles
       << " triangles)\n";
  }
  os << "F_" << r.gme.num_parties << " = " << fixed6(r.gme.f_total) << "\n";
  if (!r.gme.zero_triangles.empty()) {
    os << "zero-area triangles:\n";
    for (std::size_t k : r.gme.zero_triangles) {
      const TriangleRecord& t = r.gme.triangles[k];
      os << "  F_{" << triangle_label(t) << "} = " << fixed6(t.area);
      if (t.zero_edge >= 0) {
        const PartySet v = t.zero_edge == 0 ? t.edges.x : (t.zero_edge == 1 ? t.edges.y : t.edges.z);
        os << "  (zero edge at vertex " << v.to_string() << ")";
      }
      os << "\n";
    }
  }
  if (r.factorization) {
    os << "factors:";
    for (PartySet s : r.factorization->factors) os << " " << s.to_string();
    os << (r.factorization->is_gme ? "  (GME)" : "  (not GME)") << "\n";
  }
  for (const std::string& n : r.notices) os << "notice: " << n << "\n";
  return os.str();
}

}  // namespace ctgme
