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

#include "ctgme/tensor_core.hpp"

namespace ctgme {

/// (|0...0> + |1...1> + ... + |d-1...d-1>) / sqrt(d) on n qudits.
inline PureState ghz_state(int n, int d = 2) {
  Dims dims(static_cast<std::size_t>(n), d);
  const auto total = static_cast<Eigen::Index>(detail::checked_dimension(dims));
  CVector a = CVector::Zero(total);
  const Eigen::Index step = (total - 1) / (d - 1);  // index of |1...1>
  for (int k = 0; k < d; ++k) a(k * step) = 1.0;
  return PureState::normalized(std::move(dims), std::move(a));
}

/// Uniform superposition of the n single-excitation qubit basis states.
inline PureState w_state(int n) {
  Dims dims(static_cast<std::size_t>(n), 2);
  const auto total = static_cast<Eigen::Index>(detail::checked_dimension(dims));
  CVector a = CVector::Zero(total);
  for (int k = 0; k < n; ++k) a(Eigen::Index{1} << k) = 1.0;
  return PureState::normalized(std::move(dims), std::move(a));
}

inline PureState bell_state() { return ghz_state(2); }

inline PureState qubit_zero() { return PureState::basis({2}, {0}); }

}  // namespace ctgme
