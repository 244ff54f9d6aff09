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
#include <limits>
#include <map>
#include <string>
#include <vector>

#include <Eigen/SVD>

#include "ctgme/party_set.hpp"
#include "ctgme/tensor_core.hpp"

namespace ctgme {

/// Squared Schmidt coefficients of |psi> across `side` | rest, descending,
/// normalized to sum 1. Taken from singular values so that vanishing
/// coefficients come out at ~1e-32 rather than ~1e-16.
inline Eigen::VectorXd schmidt_weights(const PureState& psi, PartySet side) {
  detail::check_keep(psi.num_parties(), side);
  CMatrix m = bipartite_matrix(psi, side);
  if (m.rows() > m.cols()) m.transposeInPlace();
  Eigen::BDCSVD<CMatrix> svd(m);
  Eigen::VectorXd w = svd.singularValues().array().square();
  const double total = w.sum();
  if (total > 0.0) w /= total;
  return w;
}

namespace detail {

/// 2 (1 - sum w_i^2) for weights summing to 1, written as
/// 2 sum_i w_i (sum_{j != i} w_j) so no cancellation occurs.
inline double twice_linear_entropy(const Eigen::VectorXd& w) {
  const Eigen::Index n = w.size();
  // suffix sums give sum_{j > i} w_j exactly enough
  double acc = 0.0, tail = 0.0;
  for (Eigen::Index i = n - 1; i >= 0; --i) {
    acc += w(i) * tail;
    tail += w(i);
  }
  return 4.0 * acc;  // 2 * (2 * sum_{i<j} w_i w_j)
}

}  // namespace detail

/// C(S|S^c) = sqrt(2 (1 - Tr rho_S^2)).
inline double concurrence_pure(const PureState& psi, PartySet side) {
  return std::sqrt(std::max(0.0, detail::twice_linear_entropy(schmidt_weights(psi, side))));
}

inline double concurrence_pure(const PureState& psi, const Cut& cut) {
  if (cut.num_parties() != psi.num_parties()) fail(ErrorKind::invalid_argument, "cut does not match the state");
  return concurrence_pure(psi, cut.smaller_side());
}

/// Largest attainable concurrence across a cut whose smaller-dimension side
/// has dimension d.
inline double max_concurrence(int d) { return std::sqrt(2.0 * (1.0 - 1.0 / d)); }

/// Memoized cut concurrences keyed by canonical cut mask. Not thread-safe;
/// one cache per state.
class CutConcurrenceCache {
 public:
  explicit CutConcurrenceCache(const PureState& psi)
      : psi_(&psi), values_(std::size_t{1} << psi.num_parties(), std::numeric_limits<double>::quiet_NaN()) {}

  const PureState& state() const { return *psi_; }
  int num_parties() const { return psi_->num_parties(); }

  double operator()(PartySet side) {
    const Cut cut(side, num_parties());
    double& slot = values_[cut.side().mask()];
    if (std::isnan(slot)) slot = concurrence_pure(*psi_, cut.smaller_side());
    return slot;
  }

 private:
  const PureState* psi_;
  std::vector<double> values_;
};

class CutConcurrenceTable {
 public:
  CutConcurrenceTable(Dims dims, int max_subset_size, std::map<Cut, double> entries)
      : dims_(std::move(dims)), max_subset_size_(max_subset_size), entries_(std::move(entries)) {}

  const Dims& dims() const { return dims_; }
  int max_subset_size() const { return max_subset_size_; }
  const std::map<Cut, double>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  double at(PartySet side) const {
    auto it = entries_.find(Cut(side, static_cast<int>(dims_.size())));
    if (it == entries_.end()) fail(ErrorKind::invalid_argument, "cut " + side.to_string() + " is not in the table");
    return it->second;
  }

 private:
  Dims dims_;
  int max_subset_size_;
  std::map<Cut, double> entries_;
};

/// Every canonical cut whose smaller side has at most `max_subset_size` parties.
inline CutConcurrenceTable all_cut_concurrences(const PureState& psi, int max_subset_size) {
  const int n = psi.num_parties();
  if (n < 2) fail(ErrorKind::invalid_argument, "need at least two parties");
  if (max_subset_size < 1 || max_subset_size > n / 2) {
    fail(ErrorKind::invalid_argument, "max_subset_size must be in [1, " + std::to_string(n / 2) + "]");
  }
  std::map<Cut, double> entries;
  const std::uint32_t full = PartySet::all(n).mask();
  for (std::uint32_t m = 1; m < full; ++m) {
    const PartySet s(m);
    if (s.size() > max_subset_size) continue;
    Cut cut(s, n);
    if (entries.count(cut)) continue;
    entries.emplace(cut, concurrence_pure(psi, s));
  }
  return CutConcurrenceTable(psi.dims(), max_subset_size, std::move(entries));
}

/// Two-qubit mixed-state concurrence max(0, l1 - l2 - l3 - l4), where l_i
/// are the singular values of tau = W^T (sy x sy) W for rho = W W^dagger.
inline double wootters_concurrence(const DensityMatrix& rho) {
  if (rho.dims() != Dims{2, 2}) fail(ErrorKind::invalid_argument, "Wootters concurrence needs dims [2,2]");
  const EigenSystem es = hermitian_eig(rho);
  const double drop = 1e-14 * std::max(1.0, es.values.cwiseAbs().maxCoeff());
  std::vector<Eigen::Index> kept;
  for (Eigen::Index k = 0; k < es.values.size(); ++k) {
    if (es.values(k) > drop) kept.push_back(k);
  }
  if (kept.empty()) return 0.0;
  CMatrix w(4, static_cast<Eigen::Index>(kept.size()));
  for (std::size_t c = 0; c < kept.size(); ++c) {
    w.col(static_cast<Eigen::Index>(c)) = std::sqrt(es.values(kept[c])) * es.vectors.col(kept[c]);
  }
  // sy (x) sy in the computational basis
  CMatrix flip = CMatrix::Zero(4, 4);
  flip(0, 3) = -1.0;
  flip(1, 2) = 1.0;
  flip(2, 1) = 1.0;
  flip(3, 0) = -1.0;
  const CMatrix tau = w.transpose() * flip * w;
  Eigen::JacobiSVD<CMatrix> svd(tau);
  Eigen::VectorXd l = Eigen::VectorXd::Zero(4);
  l.head(svd.singularValues().size()) = svd.singularValues();
  return std::max(0.0, l(0) - l(1) - l(2) - l(3));
}

struct PartySlack {
  int party;
  double slack;
};

/// C_{ij|rest} <= C_i + C_j (`pair_bound`) and C_i <= C_{ij|rest} + C_j
/// (`single_bound`), for the ordered pair (i, j).
struct PairTriangleSlack {
  int i;
  int j;
  double pair_bound;
  double single_bound;
};

/// |T(rho_A) - T(rho_B)| <= T(rho_AB) <= T(rho_A) + T(rho_B) for disjoint A, B.
struct LinearEntropySlack {
  PartySet a;
  PartySet b;
  double lower;
  double upper;
};

struct PolygamyReport {
  std::vector<PartySlack> squared_sum;  // sum_{j!=i} C_j^2 - C_i^2
  std::vector<PartySlack> plain_sum;    // sum_{j!=i} C_j - C_i
  std::vector<PairTriangleSlack> pair_triangles;
  std::vector<LinearEntropySlack> linear_entropy;
  double min_slack = std::numeric_limits<double>::infinity();
  bool all_hold = true;

  static constexpr double kSlackTol = 1e-9;
};

inline PolygamyReport check_polygamy(const PureState& psi) {
  const int n = psi.num_parties();
  if (n < 3) fail(ErrorKind::invalid_argument, "polygamy checks need at least three parties");
  PolygamyReport rep;
  auto note = [&rep](double s) {
    rep.min_slack = std::min(rep.min_slack, s);
    if (s < -PolygamyReport::kSlackTol) rep.all_hold = false;
  };

  // T of every marginal; T of the full pure state is zero.
  const std::uint32_t full = PartySet::all(n).mask();
  std::vector<double> entropy(std::size_t{full} + 1, 0.0);
  for (std::uint32_t m = 1; m < full; ++m) {
    entropy[m] = 0.5 * detail::twice_linear_entropy(schmidt_weights(psi, PartySet(m)));
  }
  auto conc = [&](std::uint32_t m) { return std::sqrt(std::max(0.0, 2.0 * entropy[m])); };

  std::vector<double> single(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) single[static_cast<std::size_t>(i)] = conc(PartySet::single(i).mask());

  for (int i = 0; i < n; ++i) {
    double sq = 0.0, lin = 0.0;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      sq += single[static_cast<std::size_t>(j)] * single[static_cast<std::size_t>(j)];
      lin += single[static_cast<std::size_t>(j)];
    }
    const double ci = single[static_cast<std::size_t>(i)];
    rep.squared_sum.push_back({i, sq - ci * ci});
    rep.plain_sum.push_back({i, lin - ci});
    note(rep.squared_sum.back().slack);
    note(rep.plain_sum.back().slack);
  }

  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const double cij = conc((PartySet::single(i) | PartySet::single(j)).mask());
      const double ci = single[static_cast<std::size_t>(i)];
      const double cj = single[static_cast<std::size_t>(j)];
      rep.pair_triangles.push_back({i, j, ci + cj - cij, cij + cj - ci});
      note(rep.pair_triangles.back().pair_bound);
      note(rep.pair_triangles.back().single_bound);
    }
  }

  for (std::uint32_t a = 1; a < full; ++a) {
    for (std::uint32_t b = a + 1; b <= full; ++b) {
      if ((a & b) != 0) continue;
      const double ta = entropy[a], tb = entropy[b], tab = entropy[a | b];
      rep.linear_entropy.push_back({PartySet(a), PartySet(b), tab - std::abs(ta - tb), ta + tb - tab});
      note(rep.linear_entropy.back().lower);
      note(rep.linear_entropy.back().upper);
    }
  }
  return rep;
}

}  // namespace ctgme
