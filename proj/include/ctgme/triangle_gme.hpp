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
#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ctgme/concurrence.hpp"
#include "ctgme/party_set.hpp"
#include "ctgme/tensor_core.hpp"

namespace ctgme {

/// How a cut concurrence C becomes a triangle edge.
///   concurrence: edge = C,   area exponent 1/2
///   squared:     edge = C^2, area exponent 1/4
enum class EdgeConvention { concurrence, squared };

inline std::string to_string(EdgeConvention c) {
  return c == EdgeConvention::concurrence ? "concurrence" : "squared";
}

inline std::optional<EdgeConvention> parse_convention(std::string_view s) {
  if (s == "concurrence") return EdgeConvention::concurrence;
  if (s == "squared") return EdgeConvention::squared;
  return std::nullopt;
}

inline double edge_length(double concurrence, EdgeConvention c) {
  return c == EdgeConvention::squared ? concurrence * concurrence : concurrence;
}

inline double area_exponent(EdgeConvention c) { return c == EdgeConvention::squared ? 0.25 : 0.5; }

/// Cut concurrences below this are roundoff from exact product structure.
inline constexpr double kEdgeRoundoffFloor = 1e-12;
inline constexpr double kRadicandTol = 1e-9;

/// Edges in convention units; edge `a` belongs to vertex `x` (the cut x|rest),
/// `b` to `y`, `c` to `z`.
struct TriangleEdges {
  double a = 0.0, b = 0.0, c = 0.0;
  PartySet x, y, z;

  double half_perimeter() const { return 0.5 * (a + b + c); }
};

/// (16/3) Q (Q-a)(Q-b)(Q-c), evaluated in the cancellation-free ordering of
/// Heron's formula: with a >= b >= c,
/// 16 Q(Q-a)(Q-b)(Q-c) = (a+(b+c)) (c-(a-b)) (c+(a-b)) (a+(b-c)).
inline double heron_radicand(double a, double b, double c) {
  std::array<double, 3> e{a, b, c};
  std::sort(e.begin(), e.end(), std::greater<>());
  const auto [x, y, z] = e;
  return (x + (y + z)) * (z - (x - y)) * (z + (x - y)) * (x + (y - z)) / 3.0;
}

inline double heron_area_normalized(double a, double b, double c, EdgeConvention conv) {
  if (a < 0.0 || b < 0.0 || c < 0.0) fail(ErrorKind::invalid_argument, "triangle edges must be non-negative");
  const double r = heron_radicand(a, b, c);
  if (r < -kRadicandTol) {
    fail(ErrorKind::internal, "polygamy violated: Heron radicand " + detail::fmt_double(r) + " for edges (" +
                                  detail::fmt_double(a) + ", " + detail::fmt_double(b) + ", " + detail::fmt_double(c) + ")");
  }
  return std::pow(std::max(0.0, r), area_exponent(conv));
}

inline double heron_area_normalized(const TriangleEdges& t, EdgeConvention conv) {
  return heron_area_normalized(t.a, t.b, t.c, conv);
}

struct GmeTolerances {
  double area = 1e-8;  // a triangle with area <= this is zero
  double edge = 1e-6;  // a cut with concurrence <= this is a product cut
};

struct TriangleRecord {
  int level = 1;
  TriangleEdges edges;
  std::array<double, 3> concurrences{};  // raw C for the cuts of x, y, z
  double area = 0.0;
  bool zero = false;
  int zero_edge = -1;  // 0, 1, 2 for x, y, z; -1 when no edge is below tolerance
};

struct LevelValue {
  int level;
  double value;
  std::size_t num_triangles;
};

struct GmeReport {
  EdgeConvention convention = EdgeConvention::concurrence;
  int num_parties = 0;
  GmeTolerances tolerances;
  std::vector<TriangleRecord> triangles;
  std::vector<LevelValue> levels;  // empty for three parties
  double f_total = 0.0;
  bool exceeds_unit = false;
  std::vector<std::size_t> zero_triangles;  // indices into `triangles`

  bool is_gme() const { return zero_triangles.empty(); }
};

namespace detail {

inline std::size_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::size_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::size_t>(n - k + i) / static_cast<std::size_t>(i);
  return r;
}

inline double snapped_concurrence(CutConcurrenceCache& cache, PartySet side) {
  const double c = cache(side);
  return c < kEdgeRoundoffFloor ? 0.0 : c;
}

inline TriangleRecord make_triangle(CutConcurrenceCache& cache, int level, PartySet x, PartySet y, PartySet z,
                                    EdgeConvention conv, const GmeTolerances& tol) {
  TriangleRecord t;
  t.level = level;
  t.concurrences = {snapped_concurrence(cache, x), snapped_concurrence(cache, y), snapped_concurrence(cache, z)};
  t.edges = TriangleEdges{edge_length(t.concurrences[0], conv), edge_length(t.concurrences[1], conv),
                          edge_length(t.concurrences[2], conv), x, y, z};
  t.area = heron_area_normalized(t.edges, conv);
  int smallest = 0;
  for (int k = 1; k < 3; ++k) {
    if (t.concurrences[static_cast<std::size_t>(k)] < t.concurrences[static_cast<std::size_t>(smallest)]) smallest = k;
  }
  if (t.concurrences[static_cast<std::size_t>(smallest)] <= tol.edge) t.zero_edge = smallest;
  t.zero = t.area <= tol.area || t.zero_edge >= 0;
  return t;
}

/// Calls `visit(x, y, z)` for every ordered (i, S), i not in S, |S| = level,
/// with x = {i}, y = S, z = the rest.
template <typename Visit>
void for_each_level_triangle(int n, int level, Visit&& visit) {
  const std::uint32_t full = PartySet::all(n).mask();
  for (int i = 0; i < n; ++i) {
    const PartySet x = PartySet::single(i);
    for (std::uint32_t m = 1; m < full; ++m) {
      const PartySet y(m);
      if (y.size() != level || !y.disjoint(x)) continue;
      visit(x, y, (x | y).complement(n));
    }
  }
}

inline double geometric_mean(const std::vector<double>& values) {
  if (values.empty()) return 0.0;
  double log_sum = 0.0;
  for (double v : values) {
    if (v <= 0.0) return 0.0;
    log_sum += std::log(v);
  }
  return std::exp(log_sum / static_cast<double>(values.size()));
}

inline void check_level(int n, int level) {
  if (n < 4) fail(ErrorKind::invalid_argument, "level families need at least four parties");
  if (level < 1 || level > n - 3) {
    fail(ErrorKind::invalid_argument, "level must be in [1, " + std::to_string(n - 3) + "], got " + std::to_string(level));
  }
}

inline double level_value(CutConcurrenceCache& cache, int level, EdgeConvention conv, const GmeTolerances& tol,
                          std::vector<TriangleRecord>* records) {
  const int n = cache.num_parties();
  std::vector<double> areas;
  areas.reserve(static_cast<std::size_t>(n) * binomial(n - 1, level));
  for_each_level_triangle(n, level, [&](PartySet x, PartySet y, PartySet z) {
    TriangleRecord t = make_triangle(cache, level, x, y, z, conv, tol);
    areas.push_back(t.area);
    if (records) records->push_back(t);
  });
  return geometric_mean(areas);
}

inline int top_level(int n) { return (n - 2) / 2; }

}  // namespace detail

/// Normalized area of the single concurrence triangle of a tripartite state.
inline double f3(const PureState& psi, EdgeConvention conv = EdgeConvention::concurrence) {
  if (psi.num_parties() != 3) fail(ErrorKind::invalid_argument, "f3 needs exactly three parties");
  CutConcurrenceCache cache(psi);
  return detail::make_triangle(cache, 1, PartySet::single(0), PartySet::single(1), PartySet::single(2), conv, {}).area;
}

/// Geometric mean area over the level-`level` triangle family
/// {i}, S, rest with |S| = level; N * C(N-1, level) triangles.
inline double f_level(const PureState& psi, int level, EdgeConvention conv = EdgeConvention::concurrence) {
  detail::check_level(psi.num_parties(), level);
  CutConcurrenceCache cache(psi);
  return detail::level_value(cache, level, conv, {}, nullptr);
}

inline GmeReport f_total(const PureState& psi, EdgeConvention conv = EdgeConvention::concurrence,
                         const GmeTolerances& tol = {}) {
  const int n = psi.num_parties();
  if (n < 3) fail(ErrorKind::invalid_argument, "GME measure needs at least three parties");
  GmeReport rep;
  rep.convention = conv;
  rep.num_parties = n;
  rep.tolerances = tol;
  CutConcurrenceCache cache(psi);
  if (n == 3) {
    rep.triangles.push_back(
        detail::make_triangle(cache, 1, PartySet::single(0), PartySet::single(1), PartySet::single(2), conv, tol));
    rep.f_total = rep.triangles.front().area;
  } else {
    const int top = detail::top_level(n);
    double log_sum = 0.0;
    bool zero = false;
    for (int l = 1; l <= top; ++l) {
      const std::size_t before = rep.triangles.size();
      const double v = detail::level_value(cache, l, conv, tol, &rep.triangles);
      rep.levels.push_back({l, v, rep.triangles.size() - before});
      if (v <= 0.0) zero = true; else log_sum += std::log(v);
    }
    rep.f_total = zero ? 0.0 : std::exp(log_sum / top);
  }
  constexpr double kUnitSlack = 1e-12;
  rep.exceeds_unit = rep.f_total > 1.0 + kUnitSlack;
  for (std::size_t k = 0; k < rep.triangles.size(); ++k) {
    if (rep.triangles[k].area > 1.0 + kUnitSlack) rep.exceeds_unit = true;
    if (rep.triangles[k].zero) rep.zero_triangles.push_back(k);
  }
  return rep;
}

/// F_N value only, without the per-triangle inventory.
inline double gme_value(const PureState& psi, EdgeConvention conv = EdgeConvention::concurrence) {
  const int n = psi.num_parties();
  if (n == 3) return f3(psi, conv);
  if (n < 3) fail(ErrorKind::invalid_argument, "GME measure needs at least three parties");
  CutConcurrenceCache cache(psi);
  const int top = detail::top_level(n);
  double log_sum = 0.0;
  for (int l = 1; l <= top; ++l) {
    const double v = detail::level_value(cache, l, conv, {}, nullptr);
    if (v <= 0.0) return 0.0;
    log_sum += std::log(v);
  }
  return std::exp(log_sum / top);
}

}  // namespace ctgme
