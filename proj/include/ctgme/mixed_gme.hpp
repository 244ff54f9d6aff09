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

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "ctgme/random.hpp"
#include "ctgme/tensor_core.hpp"
#include "ctgme/triangle_gme.hpp"

namespace ctgme {

struct Purification {
  PureState state;      // parties: the original ones, then the reference
  int reference_party;  // 0-based index of the reference system (= N)
  int rank;
};

/// |psi>_{AR} = sum_k sqrt(l_k) |v_k>_A |k>_R over eigenvalues l_k > rank_tol.
inline Purification minimal_purification(const DensityMatrix& rho, double rank_tol = 1e-9) {
  const EigenSystem es = hermitian_eig(rho);
  int rank = 0;
  while (rank < es.values.size() && es.values(rank) > rank_tol) ++rank;
  if (rank == 0) fail(ErrorKind::validation, "all eigenvalues are below the rank tolerance");
  const Eigen::Index d = rho.dimension();
  CVector amps(d * rank);
  for (Eigen::Index x = 0; x < d; ++x) {
    for (int k = 0; k < rank; ++k) amps(x * rank + k) = std::sqrt(es.values(k)) * es.vectors(x, k);
  }
  Dims dims = rho.dims();
  dims.push_back(rank);
  if (rank == 1) dims.back() = 2;  // a party needs dimension >= 2; pad with an empty level
  CVector padded = CVector::Zero(d * dims.back());
  for (Eigen::Index x = 0; x < d; ++x) {
    for (int k = 0; k < rank; ++k) padded(x * dims.back() + k) = amps(x * rank + k);
  }
  return Purification{PureState::normalized(std::move(dims), std::move(padded)), rho.num_parties(), rank};
}

struct WitnessResult {
  double value = 0.0;
  EdgeConvention convention = EdgeConvention::concurrence;
  int rank = 0;
  bool pure_bypass = false;  // rank-1 input evaluated directly on its pure state
  bool gme_detected = false;
  GmeReport report;
};

/// GME witness of the purification. A rank-1 input would purify to
/// psi (x) |0>_R, which is never GME across R|rest, so it is evaluated on psi.
inline WitnessResult witness(const DensityMatrix& rho, EdgeConvention conv = EdgeConvention::concurrence,
                             double rank_tol = 1e-9, const GmeTolerances& tol = {}) {
  if (rho.num_parties() < 3) fail(ErrorKind::invalid_argument, "witness needs at least three parties");
  Purification pur = minimal_purification(rho, rank_tol);
  WitnessResult out;
  out.convention = conv;
  out.rank = pur.rank;
  if (pur.rank == 1) {
    const EigenSystem es = hermitian_eig(rho);
    out.pure_bypass = true;
    out.report = f_total(PureState::normalized(rho.dims(), es.vectors.col(0)), conv, tol);
  } else {
    out.report = f_total(pur.state, conv, tol);
  }
  out.value = out.report.f_total;
  out.gme_detected = out.report.is_gme() && out.value > tol.area;
  return out;
}

struct Decomposition {
  std::vector<double> weights;
  std::vector<PureState> states;

  std::size_t size() const { return weights.size(); }

  CMatrix mixture() const {
    if (states.empty()) return CMatrix();
    const Eigen::Index d = states.front().dimension();
    CMatrix m = CMatrix::Zero(d, d);
    for (std::size_t i = 0; i < states.size(); ++i) {
      const CVector& a = states[i].amplitudes();
      m += weights[i] * (a * a.adjoint());
    }
    return m;
  }
};

struct ConvexRoofConfig {
  std::vector<int> ensemble_sizes;  // empty: {r, r+1, r+2}
  int restarts = 32;
  int max_iterations = 500;
  std::uint64_t seed = 0;
  double rank_tol = 1e-9;
  double step_tol = 1e-7;
};

struct ConvexRoofResult {
  double value = 0.0;           // an upper bound on the convex roof
  double spectral_value = 0.0;  // average over the eigen-ensemble
  Decomposition best;
  int rank = 0;
  int best_ensemble_size = 0;
  std::vector<double> best_history;  // running best after each restart
  EdgeConvention convention = EdgeConvention::concurrence;
};

namespace detail {

/// Size-m ensembles of rho = W W^dagger: member i is sum_k U_ik w_k, where U
/// is m x r with orthonormal columns built from complex Givens rotations
/// (angle, phase per pair p < q) followed by r column phases.
class EnsembleParameterization {
 public:
  EnsembleParameterization(CMatrix generators, int m)
      : w_(std::move(generators)), m_(m), r_(static_cast<int>(w_.cols())) {}

  int num_params() const { return m_ * (m_ - 1) + r_; }
  int size() const { return m_; }

  CMatrix isometry(const std::vector<double>& x) const {
    CMatrix u = CMatrix::Identity(m_, m_);
    std::size_t k = 0;
    for (int p = 0; p < m_; ++p) {
      for (int q = p + 1; q < m_; ++q) {
        const double c = std::cos(x[k]), s = std::sin(x[k]);
        const Complex ph = std::polar(1.0, x[k + 1]);
        k += 2;
        const CVector cp = u.col(p), cq = u.col(q);
        u.col(p) = c * cp + s * ph * cq;
        u.col(q) = -s * std::conj(ph) * cp + c * cq;
      }
    }
    CMatrix out = u.leftCols(r_);
    for (int j = 0; j < r_; ++j) out.col(j) *= std::polar(1.0, x[k + static_cast<std::size_t>(j)]);
    return out;
  }

  /// Unnormalized members as columns (D x m).
  CMatrix members(const std::vector<double>& x) const { return w_ * isometry(x).transpose(); }

 private:
  CMatrix w_;
  int m_;
  int r_;
};

inline constexpr double kMemberDropWeight = 1e-14;

inline double ensemble_average(const CMatrix& members, const Dims& dims, EdgeConvention conv) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < members.cols(); ++i) {
    const double p = members.col(i).squaredNorm();
    if (p <= kMemberDropWeight) continue;
    total += p * gme_value(PureState(dims, members.col(i) / std::sqrt(p), 1e-8), conv);
  }
  return total;
}

inline Decomposition to_decomposition(const CMatrix& members, const Dims& dims) {
  Decomposition d;
  for (Eigen::Index i = 0; i < members.cols(); ++i) {
    const double p = members.col(i).squaredNorm();
    if (p <= kMemberDropWeight) continue;
    d.weights.push_back(p);
    d.states.emplace_back(dims, members.col(i) / std::sqrt(p), 1e-8);
  }
  return d;
}

}  // namespace detail

/// Upper bound on the convex-roof extension of F_N, by compass search over
/// ensembles of size m in `config.ensemble_sizes`. Restart 0 of each size
/// starts from the eigen-ensemble, so the result never exceeds it.
inline ConvexRoofResult convex_roof_upper_bound(const DensityMatrix& rho,
                                                EdgeConvention conv = EdgeConvention::concurrence,
                                                const ConvexRoofConfig& config = {}) {
  if (rho.num_parties() < 3) fail(ErrorKind::invalid_argument, "convex roof needs at least three parties");
  if (config.restarts < 1 || config.max_iterations < 1) fail(ErrorKind::invalid_argument, "restarts and iterations must be positive");

  const EigenSystem es = hermitian_eig(rho);
  int r = 0;
  double kept = 0.0;
  while (r < es.values.size() && es.values(r) > config.rank_tol) kept += es.values(r++);
  if (r == 0) fail(ErrorKind::validation, "all eigenvalues are below the rank tolerance");

  CMatrix w(rho.dimension(), r);
  for (int k = 0; k < r; ++k) w.col(k) = std::sqrt(es.values(k) / kept) * es.vectors.col(k);

  ConvexRoofResult out;
  out.convention = conv;
  out.rank = r;
  out.spectral_value = detail::ensemble_average(w, rho.dims(), conv);

  std::vector<int> sizes = config.ensemble_sizes;
  if (sizes.empty()) sizes = {r, r + 1, r + 2};
  for (int m : sizes) {
    if (m < r) fail(ErrorKind::invalid_argument, "ensemble size " + std::to_string(m) + " is below the rank " + std::to_string(r));
  }

  out.value = out.spectral_value;
  out.best = detail::to_decomposition(w, rho.dims());
  out.best_ensemble_size = r;
  if (r == 1) {
    out.best_history.push_back(out.value);
    return out;
  }

  for (int m : sizes) {
    const detail::EnsembleParameterization param(w, m);
    const auto np = static_cast<std::size_t>(param.num_params());
    auto objective = [&](const std::vector<double>& x) {
      return detail::ensemble_average(param.members(x), rho.dims(), conv);
    };
    for (int restart = 0; restart < config.restarts; ++restart) {
      Rng rng(derive_seed(config.seed, (static_cast<std::uint64_t>(m) << 32) | static_cast<std::uint64_t>(restart)));
      std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
      std::vector<double> x(np, 0.0);
      if (restart > 0) {
        for (double& v : x) v = angle(rng);
      }
      double fx = objective(x);
      double step = 0.4;
      for (int it = 0; it < config.max_iterations && step >= config.step_tol; ++it) {
        bool improved = false;
        for (std::size_t j = 0; j < np; ++j) {
          for (double dir : {1.0, -1.0}) {
            std::vector<double> y = x;
            y[j] += dir * step;
            const double fy = objective(y);
            if (fy < fx) {
              x = std::move(y);
              fx = fy;
              improved = true;
              break;
            }
          }
        }
        if (!improved) step *= 0.5;
      }
      if (fx < out.value) {
        out.value = fx;
        out.best = detail::to_decomposition(param.members(x), rho.dims());
        out.best_ensemble_size = m;
      }
      out.best_history.push_back(out.value);
    }
  }
  return out;
}

}  // namespace ctgme
