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
#include <complex>
#include <cstddef>
#include <cstdio>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ctgme/error.hpp"
#include "ctgme/party_set.hpp"

namespace ctgme {

using Complex = std::complex<double>;
using Dims = std::vector<int>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

inline constexpr double kDefaultTol = 1e-9;
inline constexpr std::size_t kMaxDimension = std::size_t{1} << 16;

namespace detail {

inline std::string fmt_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

inline std::size_t checked_dimension(const Dims& dims) {
  if (dims.empty()) fail(ErrorKind::validation, "dims must not be empty");
  if (dims.size() > static_cast<std::size_t>(kMaxParties)) {
    fail(ErrorKind::validation, "too many parties: " + std::to_string(dims.size()));
  }
  std::size_t total = 1;
  for (int d : dims) {
    if (d < 2) fail(ErrorKind::validation, "local dimension must be >= 2, got " + std::to_string(d));
    total *= static_cast<std::size_t>(d);
    if (total > kMaxDimension) fail(ErrorKind::validation, "total dimension exceeds " + std::to_string(kMaxDimension));
  }
  return total;
}

}  // namespace detail

/// Normalized amplitude vector over parties with local dimensions `dims`.
/// Index layout is row-major in party order: the last party varies fastest.
class PureState {
 public:
  PureState(Dims dims, CVector amplitudes, double tol = kDefaultTol)
      : dims_(std::move(dims)), amps_(std::move(amplitudes)) {
    const std::size_t total = detail::checked_dimension(dims_);
    if (static_cast<std::size_t>(amps_.size()) != total) {
      fail(ErrorKind::validation, "amplitude count " + std::to_string(amps_.size()) +
                                      " does not match product of dims " + std::to_string(total));
    }
    const double norm = amps_.norm();
    if (!(std::abs(norm - 1.0) <= tol)) {
      fail(ErrorKind::validation, "state norm check failed: |norm - 1| = " + detail::fmt_double(std::abs(norm - 1.0)));
    }
  }

  /// Rescales to unit norm; rejects the zero vector.
  static PureState normalized(Dims dims, CVector amplitudes) {
    const double norm = amplitudes.norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) fail(ErrorKind::validation, "cannot normalize a zero or non-finite vector");
    amplitudes /= norm;
    return PureState(std::move(dims), std::move(amplitudes));
  }

  /// Computational basis state |digits>.
  static PureState basis(Dims dims, const std::vector<int>& digits) {
    if (digits.size() != dims.size()) fail(ErrorKind::invalid_argument, "basis digits do not match dims");
    const std::size_t total = detail::checked_dimension(dims);
    std::size_t index = 0;
    for (std::size_t k = 0; k < dims.size(); ++k) {
      if (digits[k] < 0 || digits[k] >= dims[k]) fail(ErrorKind::invalid_argument, "basis digit out of range");
      index = index * static_cast<std::size_t>(dims[k]) + static_cast<std::size_t>(digits[k]);
    }
    CVector amps = CVector::Zero(static_cast<Eigen::Index>(total));
    amps(static_cast<Eigen::Index>(index)) = 1.0;
    return PureState(std::move(dims), std::move(amps));
  }

  const Dims& dims() const { return dims_; }
  int num_parties() const { return static_cast<int>(dims_.size()); }
  Eigen::Index dimension() const { return amps_.size(); }
  const CVector& amplitudes() const { return amps_; }

 private:
  Dims dims_;
  CVector amps_;
};

/// Hermitian, unit-trace, positive-semidefinite matrix. `tolerance()` is the
/// precision the entries were validated against (1e-3 for rounded fixtures).
class DensityMatrix {
 public:
  DensityMatrix(Dims dims, CMatrix entries, double tol = kDefaultTol)
      : dims_(std::move(dims)), rho_(std::move(entries)), tol_(tol) {
    const std::size_t total = detail::checked_dimension(dims_);
    if (rho_.rows() != rho_.cols() || static_cast<std::size_t>(rho_.rows()) != total) {
      fail(ErrorKind::validation, "density matrix must be " + std::to_string(total) + "x" + std::to_string(total));
    }
    const double herm = (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff();
    if (!(herm <= tol)) fail(ErrorKind::validation, "hermiticity check failed: max |M - M^dagger| = " + detail::fmt_double(herm));
    const double tr_err = std::abs(rho_.trace() - Complex(1.0, 0.0));
    if (!(tr_err <= tol)) fail(ErrorKind::validation, "trace check failed: |tr - 1| = " + detail::fmt_double(tr_err));
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(rho_, Eigen::EigenvaluesOnly);
    const double min_eig = solver.eigenvalues().minCoeff();
    if (!(min_eig >= -tol)) fail(ErrorKind::validation, "positivity check failed: min eigenvalue = " + detail::fmt_double(min_eig));
  }

  /// For matrices produced by exact operations on valid inputs; skips checks.
  static DensityMatrix trusted(Dims dims, CMatrix entries, double tol = kDefaultTol) {
    return DensityMatrix(Trusted{}, std::move(dims), std::move(entries), tol);
  }

  static DensityMatrix from_pure(const PureState& psi) {
    const CVector& a = psi.amplitudes();
    return trusted(psi.dims(), a * a.adjoint());
  }

  const Dims& dims() const { return dims_; }
  int num_parties() const { return static_cast<int>(dims_.size()); }
  Eigen::Index dimension() const { return rho_.rows(); }
  const CMatrix& matrix() const { return rho_; }
  double tolerance() const { return tol_; }

 private:
  struct Trusted {};
  DensityMatrix(Trusted, Dims dims, CMatrix entries, double tol)
      : dims_(std::move(dims)), rho_(std::move(entries)), tol_(tol) {}

  Dims dims_;
  CMatrix rho_;
  double tol_ = kDefaultTol;
};

/// Splits full row-major indices into (kept, traced) sub-indices, each
/// row-major in party order.
class IndexSplit {
 public:
  IndexSplit(const Dims& dims, PartySet keep) {
    const int n = static_cast<int>(dims.size());
    const std::size_t total = detail::checked_dimension(dims);
    keep_dim_ = 1;
    rest_dim_ = 1;
    for (int p = 0; p < n; ++p) (keep.contains(p) ? keep_dim_ : rest_dim_) *= dims[static_cast<std::size_t>(p)];
    keep_of_.resize(total);
    rest_of_.resize(total);
    std::vector<int> digit(static_cast<std::size_t>(n), 0);
    for (std::size_t i = 0; i < total; ++i) {
      std::size_t k = 0, r = 0;
      for (int p = 0; p < n; ++p) {
        const auto d = static_cast<std::size_t>(dims[static_cast<std::size_t>(p)]);
        const auto c = static_cast<std::size_t>(digit[static_cast<std::size_t>(p)]);
        if (keep.contains(p)) k = k * d + c; else r = r * d + c;
      }
      keep_of_[i] = k;
      rest_of_[i] = r;
      // increment the mixed-radix counter, last party fastest
      for (int p = n - 1; p >= 0; --p) {
        if (++digit[static_cast<std::size_t>(p)] < dims[static_cast<std::size_t>(p)]) break;
        digit[static_cast<std::size_t>(p)] = 0;
      }
    }
  }

  std::size_t keep_dim() const { return keep_dim_; }
  std::size_t rest_dim() const { return rest_dim_; }
  std::size_t keep_index(std::size_t full) const { return keep_of_[full]; }
  std::size_t rest_index(std::size_t full) const { return rest_of_[full]; }

 private:
  std::size_t keep_dim_ = 1;
  std::size_t rest_dim_ = 1;
  std::vector<std::size_t> keep_of_;
  std::vector<std::size_t> rest_of_;
};

/// Amplitudes arranged as a (kept x traced) matrix.
inline CMatrix bipartite_matrix(const PureState& psi, PartySet keep) {
  IndexSplit split(psi.dims(), keep);
  CMatrix m(static_cast<Eigen::Index>(split.keep_dim()), static_cast<Eigen::Index>(split.rest_dim()));
  const CVector& a = psi.amplitudes();
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const auto u = static_cast<std::size_t>(i);
    m(static_cast<Eigen::Index>(split.keep_index(u)), static_cast<Eigen::Index>(split.rest_index(u))) = a(i);
  }
  return m;
}

inline Dims sub_dims(const Dims& dims, PartySet parties) {
  Dims out;
  for (int p : parties.members()) out.push_back(dims[static_cast<std::size_t>(p)]);
  return out;
}

namespace detail {

inline void check_keep(int num_parties, PartySet keep) {
  const PartySet everyone = PartySet::all(num_parties);
  if (keep.empty() || keep == everyone || !keep.subset_of(everyone)) {
    fail(ErrorKind::invalid_argument, "improper bipartition " + keep.to_string());
  }
}

}  // namespace detail

inline PureState tensor_product(const std::vector<PureState>& factors) {
  if (factors.empty()) fail(ErrorKind::invalid_argument, "no factors");
  Dims dims;
  CVector amps = CVector::Ones(1);
  for (const PureState& f : factors) {
    dims.insert(dims.end(), f.dims().begin(), f.dims().end());
    const CVector& b = f.amplitudes();
    CVector next(amps.size() * b.size());
    for (Eigen::Index i = 0; i < amps.size(); ++i) next.segment(i * b.size(), b.size()) = amps(i) * b;
    amps = std::move(next);
  }
  detail::checked_dimension(dims);
  return PureState::normalized(std::move(dims), std::move(amps));
}

/// Reorders parties: party k of the result is party `order[k]` of `psi`.
inline PureState permute_parties(const PureState& psi, const std::vector<int>& order) {
  const int n = psi.num_parties();
  std::vector<int> sorted = order;
  std::sort(sorted.begin(), sorted.end());
  for (int k = 0; k < n; ++k) {
    if (static_cast<int>(sorted.size()) != n || sorted[static_cast<std::size_t>(k)] != k) {
      fail(ErrorKind::invalid_argument, "order is not a permutation of the parties");
    }
  }
  Dims new_dims(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) new_dims[static_cast<std::size_t>(k)] = psi.dims()[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])];
  // stride of each old party within the new layout
  std::vector<std::size_t> new_stride(static_cast<std::size_t>(n));
  std::size_t s = 1;
  for (int k = n - 1; k >= 0; --k) {
    new_stride[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])] = s;
    s *= static_cast<std::size_t>(new_dims[static_cast<std::size_t>(k)]);
  }
  const CVector& a = psi.amplitudes();
  CVector out(a.size());
  std::vector<int> digit(static_cast<std::size_t>(n), 0);
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    std::size_t j = 0;
    for (int p = 0; p < n; ++p) j += static_cast<std::size_t>(digit[static_cast<std::size_t>(p)]) * new_stride[static_cast<std::size_t>(p)];
    out(static_cast<Eigen::Index>(j)) = a(i);
    for (int p = n - 1; p >= 0; --p) {
      if (++digit[static_cast<std::size_t>(p)] < psi.dims()[static_cast<std::size_t>(p)]) break;
      digit[static_cast<std::size_t>(p)] = 0;
    }
  }
  return PureState(std::move(new_dims), std::move(out));
}

struct PlacedFactor {
  PartySet parties;  // where the factor's parties land, in increasing order
  PureState state;
};

/// Tensor product of factors living on disjoint party blocks that together
/// cover parties 0..N-1.
inline PureState assemble_product(const std::vector<PlacedFactor>& factors) {
  if (factors.empty()) fail(ErrorKind::invalid_argument, "no factors");
  std::vector<PureState> states;
  std::vector<int> placed;  // placed[t] = destination party of concatenated party t
  PartySet covered;
  for (const PlacedFactor& f : factors) {
    if (f.parties.size() != f.state.num_parties()) fail(ErrorKind::invalid_argument, "factor size does not match its party block");
    if (!covered.disjoint(f.parties)) fail(ErrorKind::invalid_argument, "factor blocks overlap");
    covered = covered | f.parties;
    states.push_back(f.state);
    for (int p : f.parties.members()) placed.push_back(p);
  }
  const int n = static_cast<int>(placed.size());
  if (covered != PartySet::all(n)) fail(ErrorKind::invalid_argument, "factor blocks must cover parties 0..N-1");
  std::vector<int> order(static_cast<std::size_t>(n));
  for (int t = 0; t < n; ++t) order[static_cast<std::size_t>(placed[static_cast<std::size_t>(t)])] = t;
  return permute_parties(tensor_product(states), order);
}

inline DensityMatrix partial_trace(const PureState& psi, PartySet keep) {
  detail::check_keep(psi.num_parties(), keep);
  const CMatrix m = bipartite_matrix(psi, keep);
  return DensityMatrix::trusted(sub_dims(psi.dims(), keep), m * m.adjoint());
}

inline DensityMatrix partial_trace(const DensityMatrix& rho, PartySet keep) {
  detail::check_keep(rho.num_parties(), keep);
  IndexSplit split(rho.dims(), keep);
  const auto kd = static_cast<Eigen::Index>(split.keep_dim());
  CMatrix out = CMatrix::Zero(kd, kd);
  const CMatrix& m = rho.matrix();
  const Eigen::Index n = m.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto ri = split.rest_index(static_cast<std::size_t>(i));
    const auto ki = static_cast<Eigen::Index>(split.keep_index(static_cast<std::size_t>(i)));
    for (Eigen::Index j = 0; j < n; ++j) {
      if (split.rest_index(static_cast<std::size_t>(j)) != ri) continue;
      out(ki, static_cast<Eigen::Index>(split.keep_index(static_cast<std::size_t>(j)))) += m(i, j);
    }
  }
  return DensityMatrix::trusted(sub_dims(rho.dims(), keep), std::move(out), rho.tolerance());
}

inline double purity(const DensityMatrix& rho) {
  // Tr(rho^2) = sum |rho_ij|^2 for Hermitian rho
  return rho.matrix().squaredNorm();
}

inline double linear_entropy(const DensityMatrix& rho) { return 1.0 - purity(rho); }

struct EigenSystem {
  Eigen::VectorXd values;  // descending
  CMatrix vectors;         // orthonormal columns matching `values`
};

inline EigenSystem hermitian_eig(const CMatrix& m, double tol = kDefaultTol) {
  if (m.rows() != m.cols()) fail(ErrorKind::invalid_argument, "hermitian_eig needs a square matrix");
  const double herm = m.size() == 0 ? 0.0 : (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (!(herm <= tol)) fail(ErrorKind::validation, "matrix is not Hermitian: max |M - M^dagger| = " + detail::fmt_double(herm));
  const CMatrix sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(sym);
  if (solver.info() != Eigen::Success) fail(ErrorKind::internal, "eigensolver did not converge");
  const Eigen::Index n = m.rows();
  EigenSystem out{Eigen::VectorXd(n), CMatrix(n, n)};
  for (Eigen::Index k = 0; k < n; ++k) {  // Eigen returns ascending order
    out.values(k) = solver.eigenvalues()(n - 1 - k);
    out.vectors.col(k) = solver.eigenvectors().col(n - 1 - k);
  }
  return out;
}

inline EigenSystem hermitian_eig(const DensityMatrix& rho) {
  return hermitian_eig(rho.matrix(), std::max(kDefaultTol, rho.tolerance()));
}

/// Kraus operators acting on a single party.
class LocalChannel {
 public:
  LocalChannel(int party, std::vector<CMatrix> kraus, double tol = kDefaultTol)
      : party_(party), kraus_(std::move(kraus)) {
    if (party_ < 0) fail(ErrorKind::invalid_argument, "channel party must be non-negative");
    if (kraus_.empty()) fail(ErrorKind::invalid_argument, "channel needs at least one Kraus operator");
    const Eigen::Index d = kraus_.front().rows();
    CMatrix sum = CMatrix::Zero(d, d);
    for (const CMatrix& k : kraus_) {
      if (k.rows() != d || k.cols() != d) fail(ErrorKind::invalid_argument, "Kraus operators must be square and equal-sized");
      sum += k.adjoint() * k;
    }
    const double err = (sum - CMatrix::Identity(d, d)).cwiseAbs().maxCoeff();
    if (!(err <= tol)) fail(ErrorKind::validation, "Kraus completeness violated: max |sum K^dagger K - I| = " + detail::fmt_double(err));
  }

  int party() const { return party_; }
  int local_dimension() const { return static_cast<int>(kraus_.front().rows()); }
  const std::vector<CMatrix>& kraus() const { return kraus_; }

 private:
  int party_;
  std::vector<CMatrix> kraus_;
};

/// (op on `party`) |psi>, unnormalized.
inline CVector apply_local_operator(const PureState& psi, int party, const CMatrix& op) {
  if (party < 0 || party >= psi.num_parties()) fail(ErrorKind::invalid_argument, "party out of range");
  const auto d = static_cast<Eigen::Index>(psi.dims()[static_cast<std::size_t>(party)]);
  if (op.rows() != d || op.cols() != d) fail(ErrorKind::invalid_argument, "operator size does not match the party dimension");
  Eigen::Index right = 1;
  for (std::size_t p = static_cast<std::size_t>(party) + 1; p < psi.dims().size(); ++p) right *= psi.dims()[p];
  const Eigen::Index left = psi.dimension() / (d * right);
  const CVector& a = psi.amplitudes();
  CVector out = CVector::Zero(a.size());
  for (Eigen::Index l = 0; l < left; ++l) {
    for (Eigen::Index r = 0; r < right; ++r) {
      for (Eigen::Index row = 0; row < d; ++row) {
        Complex acc = 0.0;
        for (Eigen::Index col = 0; col < d; ++col) acc += op(row, col) * a((l * d + col) * right + r);
        out((l * d + row) * right + r) = acc;
      }
    }
  }
  return out;
}

inline PureState apply_local_unitary(const PureState& psi, int party, const CMatrix& u) {
  return PureState::normalized(psi.dims(), apply_local_operator(psi, party, u));
}

struct Branch {
  double probability;
  PureState state;
};

inline constexpr double kBranchDropProbability = 1e-12;

/// Measurement-style unravelling of a local channel: one branch per Kraus
/// operator with p_k = ||K_k psi||^2, negligible branches dropped.
inline std::vector<Branch> apply_local_channel_branches(const PureState& psi, const LocalChannel& ch) {
  if (ch.party() >= psi.num_parties()) fail(ErrorKind::invalid_argument, "channel party out of range");
  if (ch.local_dimension() != psi.dims()[static_cast<std::size_t>(ch.party())]) {
    fail(ErrorKind::invalid_argument, "channel dimension does not match the party");
  }
  std::vector<Branch> out;
  for (const CMatrix& k : ch.kraus()) {
    CVector v = apply_local_operator(psi, ch.party(), k);
    const double p = v.squaredNorm();
    if (p < kBranchDropProbability) continue;
    v /= std::sqrt(p);
    out.push_back(Branch{p, PureState(psi.dims(), std::move(v), 1e-8)});
  }
  return out;
}

}  // namespace ctgme
