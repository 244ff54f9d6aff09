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

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "ctgme/cli.hpp"

namespace ctgme::cli {
namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_command(args, out, err);
  return {code, out.str(), err.str()};
}

std::string fixture(const char* name) { return std::string(CTGME_FIXTURE_DIR) + "/" + name; }

bool contains(const std::string& s, const std::string& what) { return s.find(what) != std::string::npos; }

TEST(Cli, AnalyzeGhz) {
  const Outcome r = run({"analyze", fixture("ghz4.json")});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(contains(r.out, "F_4 = 1.000000"));
  EXPECT_TRUE(contains(r.out, "convention: concurrence"));
}

TEST(Cli, AnalyzeRankOneFixture) {
  const Outcome r = run({"analyze", fixture("appendix_c.json"), "--tol", "1e-3"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(contains(r.out, "F_4 = 0.000000"));
  EXPECT_TRUE(contains(r.out, "factors: {1} {2} {3,4}"));
  EXPECT_TRUE(contains(r.out, "projected onto its dominant eigenvector"));
}

TEST(Cli, AnalyzeJsonIsDeterministic) {
  const Outcome a = run({"analyze", fixture("w4.json"), "--json", "--convention", "squared"});
  const Outcome b = run({"analyze", fixture("w4.json"), "--json", "--convention", "squared"});
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  const Json j = Json::parse(a.out);
  EXPECT_EQ(j["convention"], "squared");
  EXPECT_NEAR(j["f_total"].get<double>(), std::pow(5.0 / 12.0, 0.25), 1e-9);
}

TEST(Cli, AnalyzeRejectsRankTwo) {
  const Outcome r = run({"analyze", fixture("appendix_e.json")});
  EXPECT_EQ(r.code, 1);
  EXPECT_TRUE(contains(r.err, "rank 2"));
}

TEST(Cli, WitnessRecordsConvention) {
  const Outcome r = run({"witness", fixture("example3_w_mixture.json"), "--convention", "squared", "--json"});
  EXPECT_EQ(r.code, 0) << r.err;
  const Json j = Json::parse(r.out);
  EXPECT_EQ(j["convention"], "squared");
  EXPECT_EQ(j["rank"], 2);
  EXPECT_EQ(j["gme_detected"], true);
  EXPECT_NEAR(j["value"].get<double>(), 0.8034, 5e-3);
}

TEST(Cli, WitnessText) {
  const Outcome r = run({"witness", fixture("appendix_e.json")});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(contains(r.out, "convention: concurrence"));
  EXPECT_TRUE(contains(r.out, "purification rank: 2"));
}

TEST(Cli, ConvexRoofIsSeeded) {
  const std::vector<std::string> args{"convex-roof", fixture("example3_w_mixture.json"), "--restarts", "2", "--seed", "5",
                                      "--ensemble-size", "3", "--json"};
  const Outcome a = run(args), b = run(args);
  EXPECT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  const Json j = Json::parse(a.out);
  EXPECT_LE(j["upper_bound"].get<double>(), j["spectral_value"].get<double>());
  EXPECT_EQ(j["seed"], 5);
}

TEST(Cli, ConvexRoofEnsembleBelowRank) {
  EXPECT_EQ(run({"convex-roof", fixture("appendix_e.json"), "--ensemble-size", "1"}).code, 1);
}

TEST(Cli, Classify) {
  const Outcome r = run({"classify", fixture("appendix_c.json"), "--tol", "1e-3"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(contains(r.out, "factors: {1} {2} {3,4}"));
  EXPECT_TRUE(contains(r.out, "GME: no"));
}

TEST(Cli, RandomIsReproducibleAndParses) {
  const Outcome a = run({"random", "--dims", "2,3,2", "--seed", "9"});
  const Outcome b = run({"random", "--dims", "2,3,2", "--seed", "9"});
  EXPECT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  const StateDocument doc = parse_state_text(a.out);
  EXPECT_EQ(doc.dims(), (Dims{2, 3, 2}));
  EXPECT_EQ(std::get<PureState>(doc.state).amplitudes(), haar_random_pure({2, 3, 2}, 9).amplitudes());
}

TEST(Cli, RandomWritesFile) {
  const auto path = std::filesystem::temp_directory_path() / "ctgme_cli_random.json";
  EXPECT_EQ(run({"random", "--dims", "2,2", "--seed", "1", "--out", path.string()}).code, 0);
  EXPECT_TRUE(parse_state_file(path).is_pure());
  std::filesystem::remove(path);
}

TEST(Cli, SeedFromEnvironment) {
  ::setenv("GME_SEED", "9", 1);
  const Outcome env = run({"random", "--dims", "2,3,2"});
  const Outcome flag = run({"random", "--dims", "2,3,2", "--seed", "10"});
  ::unsetenv("GME_SEED");
  EXPECT_EQ(env.out, run({"random", "--dims", "2,3,2", "--seed", "9"}).out);
  EXPECT_NE(flag.out, env.out);
  EXPECT_EQ(run({"random", "--dims", "2,2"}).code, 1);
}

TEST(Cli, CheckInequalities) {
  const Outcome r = run({"check-inequalities", "--dims", "2,2,2,2", "--trials", "50", "--seed", "3"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(contains(r.out, "all inequalities hold"));
}

TEST(Cli, UnknownFlagPrintsUsage) {
  const Outcome r = run({"analyze", fixture("ghz4.json"), "--bogus"});
  EXPECT_EQ(r.code, 1);
  EXPECT_TRUE(contains(r.err, "Usage") || contains(r.err, "usage") || contains(r.err, "OPTIONS"));
}

TEST(Cli, BadInputsExitOne) {
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"analyze", "/nonexistent.json"}).code, 1);
  EXPECT_EQ(run({"analyze", fixture("ghz4.json"), "--convention", "cubed"}).code, 1);
  EXPECT_EQ(run({"random", "--dims", "2,x", "--seed", "1"}).code, 1);
}

TEST(Cli, HelpExitsZero) {
  const Outcome r = run({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(contains(r.out, "analyze"));
}

}  // namespace
}  // namespace ctgme::cli
