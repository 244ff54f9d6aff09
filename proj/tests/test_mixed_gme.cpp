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

#include <gtest/gtest.h>

#include <cmath>

#include "ctgme/mixed_gme.hpp"
#include "ctgme/random.hpp"
#include "ctgme/selftest.hpp"
#include "ctgme/standard_states.hpp"
#include "ctgme/state_document.hpp"
#include "oracles.hpp"

namespace ctgme {
namespace {

constexpr auto kConc = EdgeConvention::concurrence;
constexpr auto kSq = EdgeConvention::squared;

// Convex-roof optimum of (3/4) GHZ3 + (1/4) |000><000|, frozen from the grid
// oracle below (and equal to 9/16 analytically).
constexpr double kGhzMixtureRoof = 0.5625;

CMatrix projector(const CVector& v) { return v * v.adjoint(); }

DensityMatrix load_mixed(const char* name) {
  const StateDocument doc = parse_state_file(std::string(CTGME_FIXTURE_DIR) + "/" + name);
  return std::get<DensityMatrix>(doc.state);
}

DensityMatrix ghz_mixture() {
  const CVector zero = PureState::basis({2, 2, 2}, {0, 0, 0}).amplitudes();
  return DensityMatrix({2, 2, 2}, 0.75 * projector(ghz_state(3).amplitudes()) + 0.25 * projector(zero));
}

DensityMatrix classical_mixture() {
  const CVector zero = PureState::basis({2, 2, 2}, {0, 0, 0}).amplitudes();
  const CVector one = PureState::basis({2, 2, 2}, {1, 1, 1}).amplitudes();
  return DensityMatrix({2, 2, 2}, 0.5 * projector(zero) + 0.5 * projector(one));
}

TEST(Purification, PureInput) {
  const PureState phi = haar_random_pure({2, 2, 2}, 3);
  const Purification p = minimal_purification(DensityMatrix::from_pure(phi));
  EXPECT_EQ(p.rank, 1);
  EXPECT_EQ(p.state.dims(), (Dims{2, 2, 2, 2}));
  const CVector expected = tensor_product({phi, qubit_zero()}).amplitudes();
  EXPECT_NEAR(std::abs(expected.dot(p.state.amplitudes())), 1.0, 1e-12);
}

TEST(Purification, DiagonalQubit) {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 0) = 0.75;
  m(1, 1) = 0.25;
  const Purification p = minimal_purification(DensityMatrix({2}, m));
  EXPECT_EQ(p.rank, 2);
  const CVector& a = p.state.amplitudes();
  EXPECT_NEAR(std::abs(a(0)), std::sqrt(0.75), 1e-15);
  EXPECT_NEAR(std::abs(a(3)), 0.5, 1e-15);
  EXPECT_NEAR(std::abs(a(1)) + std::abs(a(2)), 0.0, 1e-15);
}

TEST(Purification, ReproducesTheState) {
  for (const char* name : {"appendix_e.json", "example3_w_mixture.json"}) {
    const DensityMatrix rho = load_mixed(name);
    const Purification p = minimal_purification(rho, 1e-4);
    EXPECT_EQ(p.rank, 2);
    EXPECT_EQ(p.state.num_parties(), 4);
    EXPECT_EQ(p.reference_party, 3);
    const CMatrix back = partial_trace(p.state, PartySet{0, 1, 2}).matrix();
    EXPECT_LT((back - rho.matrix()).cwiseAbs().maxCoeff(), 2e-3) << name;
  }
}

TEST(Purification, AllBelowToleranceFails) {
  EXPECT_THROW(minimal_purification(DensityMatrix({2, 2}, CMatrix::Identity(4, 4) / 4.0), 0.5), Error);
}

TEST(Witness, PureBypassEqualsFTotal) {
  Rng rng(8);
  for (int t = 0; t < 10; ++t) {
    const PureState psi = haar_random_pure({2, 2, 2, 2}, rng);
    const WitnessResult w = witness(DensityMatrix::from_pure(psi), kSq);
    EXPECT_TRUE(w.pure_bypass);
    EXPECT_EQ(w.rank, 1);
    EXPECT_NEAR(w.value, f_total(psi, kSq).f_total, 1e-12);
  }
}

TEST(Witness, WMixtureFixture) {
  const DensityMatrix rho = load_mixed("example3_w_mixture.json");
  const WitnessResult sq = witness(rho, kSq);
  const WitnessResult cc = witness(rho, kConc);
  EXPECT_NEAR(sq.value, std::pow(5.0 / 12.0, 0.25), 1e-9);
  EXPECT_NEAR(cc.value, std::sqrt(2.0 / 3.0), 1e-9);
  EXPECT_EQ(sq.convention, kSq);
  EXPECT_TRUE(sq.gme_detected);
  EXPECT_EQ(sq.rank, 2);
}

TEST(Witness, ReducedRankOneFixtureVanishes) {
  const DensityMatrix c = load_mixed("appendix_c.json");
  const PureState psi = PureState::normalized(c.dims(), hermitian_eig(c).vectors.col(0));
  const DensityMatrix reduced = partial_trace(psi, PartySet{0, 1, 3});
  for (EdgeConvention conv : {kConc, kSq}) {
    const WitnessResult w = witness(reduced, conv, 1e-4);
    EXPECT_EQ(w.rank, 2);
    EXPECT_NEAR(w.value, 0.0, 1e-6);
    EXPECT_FALSE(w.gme_detected);
  }
}

TEST(Witness, ClassicalMixtureMatchesBruteForce) {
  const Purification p = minimal_purification(classical_mixture());
  const WitnessResult w = witness(classical_mixture(), kConc);
  EXPECT_NEAR(w.value, oracle::f_total(p.state, false), 1e-9);
  EXPECT_NEAR(w.value, 1.0, 1e-9);
}

TEST(Witness, NeedsThreeParties) {
  EXPECT_THROW(witness(DensityMatrix({2, 2}, CMatrix::Identity(4, 4) / 4.0)), Error);
}

TEST(Witness, GaugeInvariance) {
  const selftest::SuiteSummary s = selftest::witness_gauge_suite(load_mixed("example3_w_mixture.json"), 1e-9, 20, 3);
  EXPECT_EQ(s.cases, 42u);
  EXPECT_EQ(s.violations, 0u) << "max change " << s.worst;
}

TEST(ConvexRoof, GridOracleValue) {
  const CVector ghz = ghz_state(3).amplitudes();
  const CVector zero = PureState::basis({2, 2, 2}, {0, 0, 0}).amplitudes();
  for (bool squared : {false, true}) {
    EXPECT_NEAR(oracle::two_member_roof_grid(ghz, zero, 0.75, 200, squared), kGhzMixtureRoof, 1e-3);
  }
}

TEST(ConvexRoof, PureInput) {
  const PureState psi = haar_random_pure({2, 2, 2}, 4);
  const ConvexRoofResult r = convex_roof_upper_bound(DensityMatrix::from_pure(psi));
  EXPECT_EQ(r.best.size(), 1u);
  EXPECT_NEAR(r.value, f3(psi), 1e-12);
}

TEST(ConvexRoof, ClassicalMixture) {
  ConvexRoofConfig cfg;
  cfg.restarts = 4;
  cfg.seed = 1;
  const ConvexRoofResult r = convex_roof_upper_bound(classical_mixture(), kConc, cfg);
  EXPECT_LE(r.value, 1e-6);
}

TEST(ConvexRoof, GhzMixture) {
  ConvexRoofConfig cfg;
  cfg.restarts = 8;
  cfg.seed = 2;
  for (EdgeConvention conv : {kConc, kSq}) {
    const ConvexRoofResult r = convex_roof_upper_bound(ghz_mixture(), conv, cfg);
    EXPECT_LE(r.value, r.spectral_value + 1e-9);
    EXPECT_LE(r.value, 0.75 + 1e-6);
    EXPECT_GE(r.value, 0.0);
    EXPECT_NEAR(r.value, kGhzMixtureRoof, 2e-2);
    EXPECT_LT((r.best.mixture() - ghz_mixture().matrix()).cwiseAbs().maxCoeff(), 1e-9);
    for (std::size_t k = 1; k < r.best_history.size(); ++k) EXPECT_LE(r.best_history[k], r.best_history[k - 1]);
  }
}

TEST(ConvexRoof, BiseparableMixtureVanishes) {
  Rng rng(9);
  CMatrix m = CMatrix::Zero(8, 8);
  for (int k = 0; k < 2; ++k) {
    const PureState s = assemble_product({{PartySet::single(k), haar_random_pure({2}, rng)},
                                          {PartySet::single(k).complement(3), haar_random_pure({2, 2}, rng)}});
    m += 0.5 * projector(s.amplitudes());
  }
  ConvexRoofConfig cfg;
  cfg.restarts = 8;
  const ConvexRoofResult r = convex_roof_upper_bound(DensityMatrix({2, 2, 2}, m), kConc, cfg);
  EXPECT_GE(r.value, 0.0);
  EXPECT_LE(r.value, 1e-6);
}

TEST(ConvexRoof, EnsembleBelowRankFails) {
  ConvexRoofConfig cfg;
  cfg.ensemble_sizes = {1};
  EXPECT_THROW(convex_roof_upper_bound(ghz_mixture(), kConc, cfg), Error);
}

TEST(ConvexRoof, Reproducible) {
  ConvexRoofConfig cfg;
  cfg.restarts = 3;
  cfg.seed = 11;
  const double a = convex_roof_upper_bound(ghz_mixture(), kConc, cfg).value;
  const double b = convex_roof_upper_bound(ghz_mixture(), kConc, cfg).value;
  EXPECT_EQ(a, b);
}

}  // namespace
}  // namespace ctgme
