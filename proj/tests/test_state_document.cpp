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

#include "ctgme/random.hpp"
#include "ctgme/report.hpp"
#include "ctgme/standard_states.hpp"
#include "ctgme/state_document.hpp"

namespace ctgme {
namespace {

std::string fixture(const char* name) { return std::string(CTGME_FIXTURE_DIR) + "/" + name; }

std::string parse_error(std::string_view text) {
  try {
    parse_state_text(text);
  } catch (const Error& e) {
    return std::string(e.what()) + (e.kind() == ErrorKind::parse ? " [parse]" : " [other]");
  }
  return "no error";
}

TEST(StateDocument, GhzFixture) {
  const StateDocument doc = parse_state_file(fixture("ghz4.json"));
  ASSERT_TRUE(doc.is_pure());
  EXPECT_NEAR(std::get<PureState>(doc.state).amplitudes().norm(), 1.0, 1e-15);
  EXPECT_EQ(doc.dims(), (Dims{2, 2, 2, 2}));
}

TEST(StateDocument, RankOneFixture) {
  const StateDocument doc = parse_state_file(fixture("appendix_c.json"));
  ASSERT_FALSE(doc.is_pure());
  const DensityMatrix& rho = std::get<DensityMatrix>(doc.state);
  EXPECT_NEAR(rho.matrix().trace().real(), 1.0, 1e-3);
  const EigenSystem es = hermitian_eig(rho);
  EXPECT_NEAR(es.values(0), 1.0, 1e-3);
  EXPECT_LT(es.values(1), 1e-3);
  EXPECT_EQ(doc.declared_tolerance, 1e-3);
}

TEST(StateDocument, RankTwoFixture) {
  const DensityMatrix rho = std::get<DensityMatrix>(parse_state_file(fixture("appendix_e.json")).state);
  const EigenSystem es = hermitian_eig(rho);
  EXPECT_NEAR(es.values(0), 0.75, 1e-3);
  EXPECT_NEAR(es.values(1), 0.25, 1e-3);
  for (Eigen::Index k = 2; k < 8; ++k) EXPECT_NEAR(es.values(k), 0.0, 1e-3);
}

TEST(StateDocument, RoundTripIsBitExact) {
  Rng rng(1);
  for (int t = 0; t < 20; ++t) {
    const PureState psi = haar_random_pure({2, 3, 2}, rng);
    const StateDocument back = parse_state_text(emit_state_document(psi));
    EXPECT_EQ(std::get<PureState>(back.state).amplitudes(), psi.amplitudes());
  }
  const DensityMatrix rho = partial_trace(haar_random_pure({2, 2, 2}, 4), PartySet{0, 1});
  const StateDocument back = parse_state_text(emit_state_document(rho));
  EXPECT_EQ(std::get<DensityMatrix>(back.state).matrix(), rho.matrix());
}

TEST(StateDocument, FieldErrors) {
  EXPECT_NE(parse_error("[1,2]").find("JSON object"), std::string::npos);
  EXPECT_NE(parse_error("{\"dims\": [2]").find("malformed JSON"), std::string::npos);
  EXPECT_NE(parse_error(R"({"dims":[2],"kind":"pure","data":[[1,0],[0]]})").find("field 'data[1]'"), std::string::npos);
  EXPECT_NE(parse_error(R"({"dims":[2],"kind":"pure","data":[[1,0]]})").find("expected 2 amplitudes"), std::string::npos);
  EXPECT_NE(parse_error(R"({"dims":[2],"kind":"weird","data":[]})").find("field 'kind'"), std::string::npos);
  EXPECT_NE(parse_error(R"({"dims":[1],"kind":"pure","data":[[1,0]]})").find("field 'dims'"), std::string::npos);
  EXPECT_NE(parse_error(R"({"dims":[2],"kind":"pure","data":[[1,0],[0,0]],"extra":1})").find("field 'extra'"), std::string::npos);
  EXPECT_NE(parse_error(R"({"dims":[2],"kind":"mixed","data":[[[1,0],[0,0]],[[0,0]]]})").find("field 'data[1]'"), std::string::npos);
  EXPECT_NE(parse_error(R"({"dims":[2],"kind":"pure","data":[[1,0],[0,0]]})"), "no error [parse]");
  EXPECT_EQ(parse_error(R"({"dims":[2],"kind":"pure","data":[[1,0],[0,0]]})"), "no error");
}

TEST(StateDocument, ValidationErrorsCarryMeasuredValue) {
  try {
    parse_state_text(R"({"dims":[2],"kind":"pure","data":[[1,0],[1,0]]})");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::validation);
    EXPECT_NE(std::string(e.what()).find("norm"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("4.142e-01"), std::string::npos);
  }
}

TEST(StateDocument, ToleranceOverride) {
  const std::string text = R"({"dims":[2],"kind":"pure","data":[[1.0001,0],[0,0]]})";
  EXPECT_THROW(parse_state_text(text), Error);
  EXPECT_NO_THROW(parse_state_text(text, 1e-3));
}

TEST(StateDocument, ChecksumMismatchIsDetected) {
  const std::string good =
      R"({"dims":[2],"kind":"pure","meta":{"checksum":{"entry_sum":1,"weighted_sum":1}},"data":[[1,0],[0,0]]})";
  EXPECT_NO_THROW(parse_state_text(good));
  const std::string swapped =
      R"({"dims":[2],"kind":"pure","meta":{"checksum":{"entry_sum":1,"weighted_sum":1}},"data":[[0,0],[1,0]]})";
  try {
    parse_state_text(swapped);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("checksum"), std::string::npos);
  }
}

TEST(StateDocument, DigestDependsOnText) {
  EXPECT_EQ(fnv1a_digest("abc"), fnv1a_digest("abc"));
  EXPECT_NE(fnv1a_digest("abc"), fnv1a_digest("abd"));
  EXPECT_EQ(fnv1a_digest("").size(), 16u);
}

TEST(Report, GhzJsonContainsUnitValue) {
  const AnalysisReport r = analyze_state(ghz_state(4), {}, "x");
  const std::string json = emit_report(r, true);
  EXPECT_NE(json.find("\"f_total\": 1.0"), std::string::npos);
  EXPECT_NE(json.find("\"convention\": \"concurrence\""), std::string::npos);
  EXPECT_EQ(json, emit_report(analyze_state(ghz_state(4), {}, "x"), true));
}

TEST(Report, TextListsZeroTriangles) {
  const DensityMatrix rho = std::get<DensityMatrix>(parse_state_file(fixture("appendix_c.json")).state);
  const PureState psi = PureState::normalized(rho.dims(), hermitian_eig(rho).vectors.col(0));
  AnalyzeOptions opt;
  opt.edge_tol = 1e-3;
  opt.reconstruction_tol = 1e-3;
  const std::string text = emit_report(analyze_state(psi, opt), false);
  EXPECT_NE(text.find("F_{1|3}"), std::string::npos);
  EXPECT_NE(text.find("F_{2|4}"), std::string::npos);
  EXPECT_NE(text.find("F_4 = 0.000000"), std::string::npos);
  EXPECT_EQ(text, emit_report(analyze_state(psi, opt), false));
}

TEST(Report, RoundsToTenSignificantDigits) {
  EXPECT_EQ(round_sig10(0.1 + 0.2), 0.3);
  EXPECT_EQ(round_sig10(1.0 - 1e-14), 1.0);
  EXPECT_EQ(round_sig10(0.0), 0.0);
}

}  // namespace
}  // namespace ctgme
