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
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "ctgme/tensor_core.hpp"

namespace ctgme {

/// All randomness comes from std::mt19937_64 seeded explicitly. Gaussian
/// draws use std::normal_distribution, so streams are reproducible for a
/// given standard library.
using Rng = std::mt19937_64;

/// SplitMix64 finalizer; used to derive independent sub-stream seeds.
inline std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  return mix_seed(master ^ mix_seed(stream + 0x632be59bd9b4e019ULL));
}

inline CVector gaussian_vector(Eigen::Index n, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CVector v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double re = normal(rng);
    const double im = normal(rng);
    v(i) = Complex(re, im);
  }
  return v;
}

inline PureState haar_random_pure(const Dims& dims, Rng& rng) {
  const auto total = static_cast<Eigen::Index>(detail::checked_dimension(dims));
  return PureState::normalized(dims, gaussian_vector(total, rng));
}

inline PureState haar_random_pure(const Dims& dims, std::uint64_t seed) {
  Rng rng(seed);
  return haar_random_pure(dims, rng);
}

/// Haar unitary from the QR decomposition of a Ginibre matrix, with the
/// phases of R's diagonal folded back into Q.
inline CMatrix haar_unitary(Eigen::Index d, Rng& rng) {
  CMatrix z(d, d);
  for (Eigen::Index c = 0; c < d; ++c) z.col(c) = gaussian_vector(d, rng);
  Eigen::HouseholderQR<CMatrix> qr(z);
  CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index c = 0; c < d; ++c) {
    const Complex diag = r(c, c);
    const double mag = std::abs(diag);
    if (mag > 0.0) q.col(c) *= diag / mag;
  }
  return q;
}

/// Random channel on one party: Kraus operators are the d x d blocks of a
/// random (num_kraus*d) x d isometry.
inline LocalChannel random_local_channel(int party, int local_dim, int num_kraus, Rng& rng) {
  if (num_kraus < 1) fail(ErrorKind::invalid_argument, "num_kraus must be >= 1");
  const Eigen::Index d = local_dim;
  const CMatrix u = haar_unitary(d * num_kraus, rng);
  std::vector<CMatrix> kraus;
  for (int k = 0; k < num_kraus; ++k) kraus.push_back(u.block(k * d, 0, d, d));
  return LocalChannel(party, std::move(kraus));
}

}  // namespace ctgme
