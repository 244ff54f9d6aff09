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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "ctgme/concurrence.hpp"
#include "ctgme/mixed_gme.hpp"
#include "ctgme/random.hpp"
#include "ctgme/standard_states.hpp"
#include "ctgme/state_document.hpp"
#include "ctgme/structure_classifier.hpp"
#include "ctgme/triangle_gme.hpp"

// Property campaign behind `ctgme selftest`. Each suite returns a summary
// that the CLI prints as one line.

namespace ctgme::selftest {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct SuiteSummary {
  std::size_t cases = 0;
  std::size_t violations = 0;
  double worst = -std::numeric_limits<double>::infinity();  // suite-specific excess measure
};

/// Polygamy and linear-entropy slacks over `trials` Haar states.
inline SuiteSummary polygamy_suite(const Dims& dims, int trials, std::uint64_t seed) {
  SuiteSummary s;
  Rng rng(seed);
  for (int t = 0; t < trials; ++t) {
    const PolygamyReport rep = check_polygamy(haar_random_pure(dims, rng));
    ++s.cases;
    if (!rep.all_hold) ++s.violations;
    s.worst = std::max(s.worst, -rep.min_slack);
  }
  return s;
}

/// |T_A - T_B| <= T_AB <= T_A + T_B on two-party marginals of Haar tripartite states.
inline SuiteSummary linear_entropy_suite(const Dims& dims, int trials, std::uint64_t seed) {
  SuiteSummary s;
  Rng rng(seed);
  const PartySet a{0}, b{1};
  for (int t = 0; t < trials; ++t) {
    const PureState psi = haar_random_pure(dims, rng);
    const DensityMatrix rab = partial_trace(psi, a | b);
    const double ta = linear_entropy(partial_trace(rab, a)), tb = linear_entropy(partial_trace(rab, b));
    const double tab = linear_entropy(rab);
    const double slack = std::min(tab - std::abs(ta - tb), ta + tb - tab);
    ++s.cases;
    if (slack < -1e-9) ++s.violations;
    s.worst = std::max(s.worst, -slack);
  }
  return s;
}

/// sum_k p_k F(branch_k) - F(psi) over random single-party channels.
inline SuiteSummary locc_monotonicity_suite(int num_parties, int pairs, std::uint64_t seed, EdgeConvention conv) {
  SuiteSummary s;
  Rng rng(seed);
  const Dims dims(static_cast<std::size_t>(num_parties), 2);
  std::uniform_int_distribution<int> party_dist(0, num_parties - 1);
  std::uniform_int_distribution<int> kraus_dist(2, 3);
  for (int t = 0; t < pairs; ++t) {
    const PureState psi = haar_random_pure(dims, rng);
    const int party = party_dist(rng);
    const LocalChannel ch = random_local_channel(party, 2, kraus_dist(rng), rng);
    double avg = 0.0;
    for (const Branch& b : apply_local_channel_branches(psi, ch)) avg += b.probability * gme_value(b.state, conv);
    const double excess = avg - gme_value(psi, conv);
    ++s.cases;
    if (excess > 1e-7) ++s.violations;
    s.worst = std::max(s.worst, excess);
  }
  return s;
}

/// G(a,b,c) = Q(Q-a)(Q-b)(Q-c); central differences on edge triples obeying
/// a^2 <= b^2 + c^2 (and cyclic). `worst` is the most negative derivative, negated.
inline SuiteSummary edge_monotonicity_suite(int samples, std::uint64_t seed) {
  SuiteSummary s;
  Rng rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto g = [](double a, double b, double c) {
    const double q = 0.5 * (a + b + c);
    return q * (q - a) * (q - b) * (q - c);
  };
  constexpr double h = 1e-5;
  while (static_cast<int>(s.cases) < samples) {
    const double a = u(rng), b = u(rng), c = u(rng);
    if (a * a > b * b + c * c || b * b > a * a + c * c || c * c > a * a + b * b) continue;
    const double da = (g(a + h, b, c) - g(a - h, b, c)) / (2 * h);
    const double db = (g(a, b + h, c) - g(a, b - h, c)) / (2 * h);
    const double dc = (g(a, b, c + h) - g(a, b, c - h)) / (2 * h);
    const double lowest = std::min({da, db, dc});
    ++s.cases;
    if (lowest < -1e-9) ++s.violations;
    s.worst = std::max(s.worst, -lowest);
  }
  return s;
}

/// Largest change of cut concurrences and F under random single-party unitaries.
inline SuiteSummary local_unitary_suite(int trials, std::uint64_t seed) {
  SuiteSummary s;
  Rng rng(seed);
  const Dims dims{2, 3, 2, 2};
  std::uniform_int_distribution<int> party_dist(0, 3);
  for (int t = 0; t < trials; ++t) {
    const PureState psi = haar_random_pure(dims, rng);
    const int party = party_dist(rng);
    const PureState moved = apply_local_unitary(psi, party, haar_unitary(dims[static_cast<std::size_t>(party)], rng));
    double diff = 0.0;
    const auto before = all_cut_concurrences(psi, 2), after = all_cut_concurrences(moved, 2);
    for (const auto& [cut, c] : before.entries()) diff = std::max(diff, std::abs(c - after.entries().at(cut)));
    for (EdgeConvention conv : {EdgeConvention::concurrence, EdgeConvention::squared}) {
      diff = std::max(diff, std::abs(gme_value(psi, conv) - gme_value(moved, conv)));
    }
    ++s.cases;
    if (diff > 1e-9) ++s.violations;
    s.worst = std::max(s.worst, diff);
  }
  return s;
}

/// Random biseparable 5-qubit state: Haar factors on a random nonempty proper
/// party block and its complement.
inline PureState random_biseparable(int n, Rng& rng) {
  std::uniform_int_distribution<std::uint32_t> mask_dist(1, PartySet::all(n).mask() - 1);
  const PartySet block(mask_dist(rng));
  const PartySet rest = block.complement(n);
  return assemble_product({{block, haar_random_pure(Dims(static_cast<std::size_t>(block.size()), 2), rng)},
                           {rest, haar_random_pure(Dims(static_cast<std::size_t>(rest.size()), 2), rng)}});
}

/// Counts states where F_5^(1) and F_5^(2) disagree on being zero.
inline SuiteSummary level_equivalence_suite(int biseparable, int haar, std::uint64_t seed) {
  SuiteSummary s;
  Rng rng(seed);
  auto check = [&s](const PureState& psi) {
    const bool z1 = f_level(psi, 1) <= 1e-8;
    const bool z2 = f_level(psi, 2) <= 1e-8;
    ++s.cases;
    if (z1 != z2) ++s.violations;
  };
  for (int k = 0; k < biseparable; ++k) check(random_biseparable(5, rng));
  for (int k = 0; k < haar; ++k) check(haar_random_pure(Dims(5, 2), rng));
  s.worst = static_cast<double>(s.violations);
  return s;
}

/// Witness change under random unitaries on the reference system and under
/// zero-padding of the reference dimension.
inline SuiteSummary witness_gauge_suite(const DensityMatrix& rho, double rank_tol, int gauges, std::uint64_t seed,
                                        const std::vector<EdgeConvention>& conventions = {EdgeConvention::concurrence,
                                                                                          EdgeConvention::squared}) {
  SuiteSummary s;
  const Purification pur = minimal_purification(rho, rank_tol);
  const int ref = pur.reference_party;
  for (EdgeConvention conv : conventions) {
    Rng rng(seed);
    const double base = gme_value(pur.state, conv);
    auto record = [&](double v) {
      const double d = std::abs(v - base);
      ++s.cases;
      if (d >= 1e-8) ++s.violations;
      s.worst = std::max(s.worst, d);
    };
    for (int g = 0; g < gauges; ++g) {
      const CMatrix u = haar_unitary(pur.state.dims()[static_cast<std::size_t>(ref)], rng);
      record(gme_value(apply_local_unitary(pur.state, ref, u), conv));
    }
    // pad R with two empty levels
    const Dims& dims = pur.state.dims();
    const Eigen::Index r = dims.back();
    Dims padded_dims = dims;
    padded_dims.back() = static_cast<int>(r + 2);
    const Eigen::Index outer = pur.state.dimension() / r;
    CVector padded = CVector::Zero(outer * (r + 2));
    for (Eigen::Index x = 0; x < outer; ++x) padded.segment(x * (r + 2), r) = pur.state.amplitudes().segment(x * r, r);
    record(gme_value(PureState(padded_dims, padded), conv));
  }
  return s;
}

inline std::string summary_detail(const SuiteSummary& s, const char* worst_label) {
  return std::to_string(s.cases) + " cases, " + std::to_string(s.violations) + " violations, " + worst_label + " " +
         detail::fmt_double(s.worst);
}

inline CheckResult close_check(std::string name, double got, double want, double tol) {
  const bool ok = std::abs(got - want) <= tol;
  return {std::move(name), ok, "got " + detail::fmt_double(got) + ", want " + detail::fmt_double(want) + " +/- " + detail::fmt_double(tol)};
}

inline PureState dominant_pure(const DensityMatrix& rho) {
  const EigenSystem es = hermitian_eig(rho);
  return PureState::normalized(rho.dims(), es.vectors.col(0));
}

inline std::vector<CheckResult> run_all(const std::filesystem::path& fixture_dir, std::uint64_t seed,
                                        const std::function<void(const CheckResult&)>& on_result = {}) {
  std::vector<CheckResult> out;
  auto add = [&](CheckResult r) {
    if (on_result) on_result(r);
    out.push_back(std::move(r));
  };
  auto suite = [&](std::string name, const SuiteSummary& s, const char* label) {
    add({std::move(name), s.violations == 0, summary_detail(s, label)});
  };
  const auto sq = EdgeConvention::squared;
  const auto cc = EdgeConvention::concurrence;

  // golden values on standard states
  add(close_check("GHZ4 F4 (concurrence)", gme_value(ghz_state(4), cc), 1.0, 1e-9));
  add(close_check("GHZ4 F4 (squared)", gme_value(ghz_state(4), sq), 1.0, 1e-9));
  add(close_check("W4 F4 (squared) = (5/12)^(1/4)", gme_value(w_state(4), sq), std::pow(5.0 / 12.0, 0.25), 1e-9));
  add(close_check("W4 F4 (concurrence) = sqrt(2/3)", gme_value(w_state(4), cc), std::sqrt(2.0 / 3.0), 1e-9));
  add(close_check("W3 F3 (concurrence) = 8/9", f3(w_state(3), cc), 8.0 / 9.0, 1e-9));
  add(close_check("GHZ6 F6", gme_value(ghz_state(6), cc), 1.0, 1e-9));

  // rank-1 fixture: biseparable four-qubit state
  try {
    const StateDocument c_doc = parse_state_file(fixture_dir / "appendix_c.json");
    const DensityMatrix& c_rho = std::get<DensityMatrix>(c_doc.state);
    const PureState c_psi = dominant_pure(c_rho);
    const GmeReport rep = f_total(c_psi, cc, GmeTolerances{1e-8, 1e-3});
    add({"appendix_c F4 = 0", rep.f_total <= 1e-6, "F4 = " + detail::fmt_double(rep.f_total)});
    bool z13 = false, z24 = false;
    for (std::size_t k : rep.zero_triangles) {
      const auto& t = rep.triangles[k];
      if (t.edges.x == PartySet{0} && t.edges.y == PartySet{2}) z13 = true;
      if (t.edges.x == PartySet{1} && t.edges.y == PartySet{3}) z24 = true;
    }
    add({"appendix_c triangles 1|3 and 2|4 zero", z13 && z24, ""});
    add(close_check("appendix_c C_{3|124}", concurrence_pure(c_psi, PartySet{2}), 0.866, 5e-3));
    add(close_check("appendix_c C_{4|123}", concurrence_pure(c_psi, PartySet{3}), 0.866, 5e-3));
    const Factorization f = finest_factorization(c_psi, 1e-3, 1e-3);
    const bool factors_ok = f.factors == std::vector<PartySet>{PartySet{0}, PartySet{1}, PartySet{2, 3}};
    add({"appendix_c factors {1},{2},{3,4}", factors_ok, ""});
    const DensityMatrix reduced = partial_trace(c_psi, PartySet{0, 1, 3});
    add(close_check("appendix_c witness of Tr_3", witness(reduced, cc, 1e-4).value, 0.0, 1e-6));
  } catch (const Error& e) {
    add({"appendix_c fixture", false, e.what()});
  }

  // rank-2 three-qubit fixture
  try {
    const StateDocument e_doc = parse_state_file(fixture_dir / "appendix_e.json");
    const DensityMatrix& e_rho = std::get<DensityMatrix>(e_doc.state);
    const EigenSystem es = hermitian_eig(e_rho);
    add({"appendix_e eigenvalues {3/4, 1/4}",
         std::abs(es.values(0) - 0.75) <= 1e-3 && std::abs(es.values(1) - 0.25) <= 1e-3 && std::abs(es.values(2)) <= 1e-3,
         "top eigenvalues " + detail::fmt_double(es.values(0)) + ", " + detail::fmt_double(es.values(1))});
    for (auto [i, j] : {std::pair{0, 1}, std::pair{0, 2}, std::pair{1, 2}}) {
      const double c = wootters_concurrence(partial_trace(e_rho, PartySet{i, j}));
      add(close_check("appendix_e C(rho_" + std::to_string(i + 1) + std::to_string(j + 1) + ") = 1/2", c, 0.5, 5e-3));
    }
    const double wc = witness(e_rho, cc, 1e-4).value, ws = witness(e_rho, sq, 1e-4).value;
    const bool match = std::abs(wc - 0.8034) <= 5e-3 || std::abs(ws - 0.8034) <= 5e-3;
    add({"appendix_e witness = 0.8034 (some convention)", match,
         "concurrence " + detail::fmt_double(wc) + ", squared " + detail::fmt_double(ws)});
    suite("appendix_e witness gauge invariance", witness_gauge_suite(e_rho, 1e-4, 20, seed + 9, {cc}), "max change");
  } catch (const Error& e) {
    add({"appendix_e fixture", false, e.what()});
  }

  // rank-2 W mixture: purifies to W4
  try {
    const StateDocument w_doc = parse_state_file(fixture_dir / "example3_w_mixture.json");
    const DensityMatrix& w_rho = std::get<DensityMatrix>(w_doc.state);
    add(close_check("W mixture witness (squared)", witness(w_rho, sq).value, std::pow(5.0 / 12.0, 0.25), 1e-9));
    add(close_check("W mixture witness (concurrence)", witness(w_rho, cc).value, std::sqrt(2.0 / 3.0), 1e-9));
    suite("W mixture witness gauge invariance", witness_gauge_suite(w_rho, 1e-9, 20, seed + 14), "max change");
  } catch (const Error& e) {
    add({"example3_w_mixture fixture", false, e.what()});
  }

  // property suites
  suite("polygamy N=3 qubits", polygamy_suite({2, 2, 2}, 1000, seed + 1), "worst violation");
  suite("polygamy N=4 qubits", polygamy_suite({2, 2, 2, 2}, 1000, seed + 2), "worst violation");
  suite("polygamy N=5 qubits", polygamy_suite({2, 2, 2, 2, 2}, 1000, seed + 3), "worst violation");
  suite("polygamy N=3 qutrits", polygamy_suite({3, 3, 3}, 1000, seed + 4), "worst violation");
  suite("linear-entropy inequality, qubit marginals", linear_entropy_suite({2, 2, 2}, 1000, seed + 12), "worst violation");
  suite("linear-entropy inequality, mixed-dimension marginals", linear_entropy_suite({2, 3, 4}, 1000, seed + 13), "worst violation");
  for (EdgeConvention conv : {cc, sq}) {
    suite("LOCC monotonicity N=3 (" + to_string(conv) + ")", locc_monotonicity_suite(3, 100, seed + 5, conv), "worst excess");
    suite("LOCC monotonicity N=4 (" + to_string(conv) + ")", locc_monotonicity_suite(4, 100, seed + 6, conv), "worst excess");
  }
  suite("edge monotonicity of G", edge_monotonicity_suite(1000, seed + 7), "most negative derivative");
  suite("local-unitary invariance", local_unitary_suite(100, seed + 8), "max change");
  suite("F5 level equivalence", level_equivalence_suite(50, 50, seed + 10), "exceptions");

  // convex roof
  {
    const PureState ghz = ghz_state(3);
    const PureState zero = PureState::basis({2, 2, 2}, {0, 0, 0});
    const CMatrix mix = 0.75 * ghz.amplitudes() * ghz.amplitudes().adjoint() + 0.25 * zero.amplitudes() * zero.amplitudes().adjoint();
    ConvexRoofConfig cfg;
    cfg.seed = seed + 11;
    const ConvexRoofResult res = convex_roof_upper_bound(DensityMatrix({2, 2, 2}, mix), cc, cfg);
    add({"convex roof GHZ/000 mixture", res.value <= res.spectral_value + 1e-9 && std::abs(res.value - 0.5625) <= 2e-2,
         "upper bound " + detail::fmt_double(res.value) + ", spectral " + detail::fmt_double(res.spectral_value)});
    const PureState one = PureState::basis({2, 2, 2}, {1, 1, 1});
    const CMatrix classical = 0.5 * zero.amplitudes() * zero.amplitudes().adjoint() + 0.5 * one.amplitudes() * one.amplitudes().adjoint();
    const ConvexRoofResult res2 = convex_roof_upper_bound(DensityMatrix({2, 2, 2}, classical), cc, cfg);
    add({"convex roof classical mixture", res2.value <= 1e-6, "upper bound " + detail::fmt_double(res2.value)});
  }
  return out;
}

}  // namespace ctgme::selftest
