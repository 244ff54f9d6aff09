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
#include <string>
#include <utility>
#include <vector>

#include "ctgme/concurrence.hpp"
#include "ctgme/party_set.hpp"
#include "ctgme/tensor_core.hpp"

namespace ctgme {

/// Exhaustive cut enumeration is exponential; beyond this the classifier refuses.
inline constexpr int kClassifierMaxParties = 10;
inline constexpr double kDefaultProductTol = 1e-6;

struct CutValue {
  Cut cut;
  double concurrence;
};

struct Factorization {
  std::vector<PartySet> factors;  // ordered by lowest party
  bool is_gme = true;
  std::vector<CutValue> product_cuts;
  std::vector<CutValue> marginal_cuts;  // within a factor of 10 of the tolerance
  double reconstruction_error = 0.0;
};

namespace detail {

inline void check_classifier_size(int n) {
  if (n < 2) fail(ErrorKind::invalid_argument, "classifier needs at least two parties");
  if (n > kClassifierMaxParties) {
    fail(ErrorKind::invalid_argument, "classifier is limited to " + std::to_string(kClassifierMaxParties) + " parties");
  }
}

inline std::vector<CutValue> all_canonical_cuts(const PureState& psi) {
  const int n = psi.num_parties();
  std::vector<CutValue> out;
  const std::uint32_t full = PartySet::all(n).mask();
  for (std::uint32_t m = 1; m < full; m += 2) {  // odd masks contain party 0
    Cut cut(PartySet(m), n);
    out.push_back({cut, concurrence_pure(psi, cut)});
  }
  std::sort(out.begin(), out.end(), [](const CutValue& a, const CutValue& b) { return a.cut < b.cut; });
  return out;
}

/// Common refinement of {all parties} by every cut in `cuts`.
inline std::vector<PartySet> refine(int n, const std::vector<Cut>& cuts) {
  std::vector<PartySet> blocks{PartySet::all(n)};
  for (const Cut& cut : cuts) {
    std::vector<PartySet> next;
    for (PartySet b : blocks) {
      const PartySet in = b & cut.side();
      const PartySet out = b & cut.other_side();
      if (!in.empty()) next.push_back(in);
      if (!out.empty()) next.push_back(out);
    }
    blocks = std::move(next);
  }
  std::sort(blocks.begin(), blocks.end(), [](PartySet a, PartySet b) { return a.lowest() < b.lowest(); });
  return blocks;
}

/// max |(tensor product of factor marginals) - |psi><psi|| entrywise.
inline double product_reconstruction_error(const PureState& psi, const std::vector<PartySet>& factors) {
  if (factors.size() <= 1) return 0.0;
  std::vector<IndexSplit> splits;
  std::vector<CMatrix> marginals;
  for (PartySet f : factors) {
    splits.emplace_back(psi.dims(), f);
    marginals.push_back(partial_trace(psi, f).matrix());
  }
  const CVector& a = psi.amplitudes();
  const Eigen::Index d = a.size();
  double worst = 0.0;
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      Complex prod = 1.0;
      for (std::size_t f = 0; f < factors.size(); ++f) {
        prod *= marginals[f](static_cast<Eigen::Index>(splits[f].keep_index(static_cast<std::size_t>(i))),
                             static_cast<Eigen::Index>(splits[f].keep_index(static_cast<std::size_t>(j))));
      }
      worst = std::max(worst, std::abs(prod - a(i) * std::conj(a(j))));
    }
  }
  return worst;
}

}  // namespace detail

/// Canonical cuts whose concurrence is at most `tol`.
inline std::vector<Cut> product_cuts(const PureState& psi, double tol = kDefaultProductTol) {
  detail::check_classifier_size(psi.num_parties());
  std::vector<Cut> out;
  for (const CutValue& cv : detail::all_canonical_cuts(psi)) {
    if (cv.concurrence <= tol) out.push_back(cv.cut);
  }
  return out;
}

/// Finest product structure visible from vanishing cut concurrences, checked by
/// rebuilding |psi><psi| from the factor marginals.
inline Factorization finest_factorization(const PureState& psi, double tol = kDefaultProductTol,
                                          double reconstruction_tol = 1e-6) {
  const int n = psi.num_parties();
  detail::check_classifier_size(n);
  Factorization out;
  std::vector<Cut> cuts;
  for (const CutValue& cv : detail::all_canonical_cuts(psi)) {
    if (cv.concurrence <= tol) {
      out.product_cuts.push_back(cv);
      cuts.push_back(cv.cut);
    }
    if (cv.concurrence >= tol / 10.0 && cv.concurrence <= tol * 10.0) out.marginal_cuts.push_back(cv);
  }
  out.factors = detail::refine(n, cuts);
  out.is_gme = out.factors.size() == 1;
  out.reconstruction_error = detail::product_reconstruction_error(psi, out.factors);
  if (!(out.reconstruction_error <= reconstruction_tol)) {
    fail(ErrorKind::validation, "inconsistent factorization: reconstruction error " +
                                    detail::fmt_double(out.reconstruction_error) + " exceeds " +
                                    detail::fmt_double(reconstruction_tol));
  }
  return out;
}

}  // namespace ctgme
