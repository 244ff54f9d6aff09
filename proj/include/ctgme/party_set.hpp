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

#include <bit>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include "ctgme/error.hpp"

namespace ctgme {

/// Parties are indexed from 0 internally; everything user-facing (reports,
/// `to_string`) prints them 1-based.
inline constexpr int kMaxParties = 24;

/// A set of party indices stored as a bitmask.
class PartySet {
 public:
  constexpr PartySet() = default;
  constexpr explicit PartySet(std::uint32_t mask) : mask_(mask) {}
  PartySet(std::initializer_list<int> parties) {
    for (int p : parties) insert(p);
  }

  static PartySet of(const std::vector<int>& parties) {
    PartySet s;
    for (int p : parties) s.insert(p);
    return s;
  }
  static constexpr PartySet all(int num_parties) {
    return PartySet(num_parties >= 32 ? ~0u : ((1u << num_parties) - 1u));
  }
  static constexpr PartySet single(int party) { return PartySet(1u << party); }

  void insert(int party) {
    if (party < 0 || party >= kMaxParties) {
      fail(ErrorKind::invalid_argument, "party index out of range: " + std::to_string(party));
    }
    mask_ |= (1u << party);
  }

  constexpr std::uint32_t mask() const { return mask_; }
  constexpr bool empty() const { return mask_ == 0; }
  constexpr int size() const { return std::popcount(mask_); }
  constexpr bool contains(int party) const { return (mask_ >> party) & 1u; }
  constexpr int lowest() const { return mask_ == 0 ? -1 : std::countr_zero(mask_); }

  constexpr PartySet complement(int num_parties) const {
    return PartySet(all(num_parties).mask_ & ~mask_);
  }
  constexpr PartySet operator|(PartySet o) const { return PartySet(mask_ | o.mask_); }
  constexpr PartySet operator&(PartySet o) const { return PartySet(mask_ & o.mask_); }
  constexpr bool disjoint(PartySet o) const { return (mask_ & o.mask_) == 0; }
  constexpr bool subset_of(PartySet o) const { return (mask_ & ~o.mask_) == 0; }

  std::vector<int> members() const {
    std::vector<int> out;
    for (std::uint32_t m = mask_; m != 0; m &= m - 1) out.push_back(std::countr_zero(m));
    return out;
  }

  /// 1-based, e.g. "{1,3}".
  std::string to_string() const {
    std::string s = "{";
    bool first = true;
    for (int p : members()) {
      if (!first) s += ',';
      s += std::to_string(p + 1);
      first = false;
    }
    return s + "}";
  }

  friend constexpr auto operator<=>(PartySet, PartySet) = default;

 private:
  std::uint32_t mask_ = 0;
};

/// A bipartition S | S^c of `num_parties` parties, stored canonically as the
/// side containing party 0 so that S|S^c and S^c|S compare equal.
class Cut {
 public:
  Cut(PartySet side, int num_parties) : num_parties_(num_parties) {
    if (num_parties < 2 || num_parties > kMaxParties) {
      fail(ErrorKind::invalid_argument, "cut needs between 2 and " + std::to_string(kMaxParties) + " parties");
    }
    const PartySet everyone = PartySet::all(num_parties);
    if (side.empty() || side == everyone || !side.subset_of(everyone)) {
      fail(ErrorKind::invalid_argument, "improper bipartition " + side.to_string());
    }
    side_ = side.contains(0) ? side : side.complement(num_parties);
  }

  PartySet side() const { return side_; }
  PartySet other_side() const { return side_.complement(num_parties_); }
  int num_parties() const { return num_parties_; }

  /// The side with fewer parties (ties go to the canonical side).
  PartySet smaller_side() const {
    PartySet other = other_side();
    return other.size() < side_.size() ? other : side_;
  }

  std::string to_string() const { return side_.to_string() + "|" + other_side().to_string(); }

  friend bool operator==(const Cut&, const Cut&) = default;
  friend auto operator<=>(const Cut& a, const Cut& b) {
    if (auto c = a.num_parties_ <=> b.num_parties_; c != 0) return c;
    // order by smaller side size first so tables list singletons before pairs
    if (auto c = a.smaller_side().size() <=> b.smaller_side().size(); c != 0) return c;
    return a.side_ <=> b.side_;
  }

 private:
  PartySet side_;
  int num_parties_ = 0;
};

}  // namespace ctgme
