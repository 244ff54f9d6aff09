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

// Slow reference implementations that share no code with the library beyond
// the amplitude container. Used to cross-check the fast paths.

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

#include "ctgme/tensor_core.hpp"

namespace oracle {

using cd = std::complex<double>;
using Mat = std::vector<std::vector<cd>>;

inline std::vector<int> digits_of(std::size_t index, const std::vector<int>& dims) {
  std::vector<int> d(dims.size());
  for (std::size_t k = dims.size(); k-- > 0;) {
    d[k] = static_cast<int>(index % static_cast<std::size_t>(dims[k]));
    index /= static_cast<std::size_t>(dims[k]);
  }
  return d;
}

/// rho_keep[i][j] = sum over basis states whose non-kept digits agree.
inline Mat reduced(const ctgme::PureState& psi, std::uint32_t keep) {
  const auto& dims = psi.dims();
  std::vector<int> kept_dims;
  for (std::size_t k = 0; k < dims.size(); ++k)
    if ((keep >> k) & 1u) kept_dims.push_back(dims[k]);
  std::size_t kd = 1;
  for (int d : kept_dims) kd *= static_cast<std::size_t>(d);
  Mat rho(kd, std::vector<cd>(kd, 0.0));
  const auto n = static_cast<std::size_t>(psi.dimension());
  auto kept_index = [&](const std::vector<int>& dg) {
    std::size_t idx = 0;
    for (std::size_t k = 0; k < dims.size(); ++k)
      if ((keep >> k) & 1u) idx = idx * static_cast<std::size_t>(dims[k]) + static_cast<std::size_t>(dg[k]);
    return idx;
  };
  for (std::size_t a = 0; a < n; ++a) {
    const auto da = digits_of(a, dims);
    for (std::size_t b = 0; b < n; ++b) {
      const auto db = digits_of(b, dims);
      bool same = true;
      for (std::size_t k = 0; k < dims.size(); ++k)
        if (!((keep >> k) & 1u) && da[k] != db[k]) same = false;
      if (!same) continue;
      rho[kept_index(da)][kept_index(db)] += psi.amplitudes()(static_cast<Eigen::Index>(a)) *
                                            std::conj(psi.amplitudes()(static_cast<Eigen::Index>(b)));
    }
  }
  return rho;
}

inline double purity(const Mat& rho) {
  double p = 0.0;
  for (std::size_t i = 0; i < rho.size(); ++i)
    for (std::size_t j = 0; j < rho.size(); ++j) p += std::norm(rho[i][j]);
  return p;
}

inline double concurrence(const ctgme::PureState& psi, std::uint32_t side) {
  return std::sqrt(std::max(0.0, 2.0 * (1.0 - purity(reduced(psi, side)))));
}

/// Textbook Heron formula, scaled by 16/3 and raised to `exponent`.
inline double heron(double a, double b, double c, double exponent) {
  const double q = (a + b + c) / 2.0;
  const double g = (16.0 / 3.0) * q * (q - a) * (q - b) * (q - c);
  return std::pow(std::max(0.0, g), exponent);
}

/// F at level l: geometric mean of all N * C(N-1, l) triangle areas.
/// `squared` selects edges C^2 with exponent 1/4.
inline double f_level(const ctgme::PureState& psi, int l, bool squared, double zero_edge = 1e-7) {
  const int n = psi.num_parties();
  const std::uint32_t full = (1u << n) - 1u;
  double log_sum = 0.0;
  int count = 0;
  bool zero = false;
  auto edge = [&](std::uint32_t s) {
    double c = concurrence(psi, s);
    if (c < zero_edge) c = 0.0;
    return squared ? c * c : c;
  };
  for (int i = 0; i < n; ++i) {
    for (std::uint32_t s = 1; s < full; ++s) {
      if ((s >> i) & 1u || std::popcount(s) != l) continue;
      const std::uint32_t rest = full & ~s & ~(1u << i);
      const double area = heron(edge(1u << i), edge(s), edge(rest), squared ? 0.25 : 0.5);
      ++count;
      if (area <= 0.0) zero = true; else log_sum += std::log(area);
    }
  }
  return zero ? 0.0 : std::exp(log_sum / count);
}

inline double f_total(const ctgme::PureState& psi, bool squared) {
  const int n = psi.num_parties();
  if (n == 3) {
    auto e = [&](std::uint32_t s) {
      const double c = concurrence(psi, s);
      return c < 1e-7 ? 0.0 : (squared ? c * c : c);
    };
    return heron(e(1), e(2), e(4), squared ? 0.25 : 0.5);
  }
  const int top = (n - 2) / 2;
  double prod = 1.0;
  for (int l = 1; l <= top; ++l) prod *= f_level(psi, l, squared);
  return std::pow(prod, 1.0 / top);
}

/// Minimum ensemble average of F3 over all two-member decompositions of
/// p|a><a| + (1-p)|b><b|, scanning a (theta, phi) grid of U(2).
inline double two_member_roof_grid(const ctgme::CVector& a, const ctgme::CVector& b, double p, int steps, bool squared) {
  const ctgme::Dims dims{2, 2, 2};
  const ctgme::CVector wa = std::sqrt(p) * a, wb = std::sqrt(1.0 - p) * b;
  double best = 1e300;
  for (int t = 0; t <= steps; ++t) {
    const double th = (std::numbers::pi / 2.0) * t / steps;
    for (int f = 0; f < steps; ++f) {
      const cd ph = std::polar(1.0, 2.0 * std::numbers::pi * f / steps);
      const ctgme::CVector m1 = std::cos(th) * wa + ph * std::sin(th) * wb;
      const ctgme::CVector m2 = -std::sin(th) * wa + ph * std::cos(th) * wb;
      double avg = 0.0;
      for (const ctgme::CVector* m : {&m1, &m2}) {
        const double w = m->squaredNorm();
        if (w < 1e-14) continue;
        avg += w * f_total(ctgme::PureState(dims, *m / std::sqrt(w)), squared);
      }
      best = std::min(best, avg);
    }
  }
  return best;
}

}  // namespace oracle
