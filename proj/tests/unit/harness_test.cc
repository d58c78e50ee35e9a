// Copyright 2026 The ppalab Authors
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


#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gmock/gmock.h>
#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "ppa/common/error.h"
#include "ppa/harness/config.h"
#include "ppa/harness/experiment.h"
#include "ppa/harness/report.h"

namespace ppa::harness {
namespace {

using ::testing::HasSubstr;
using nlohmann::json;

std::string ConfigErrorText(const std::string& text) {
  try {
    ValidateConfig(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

std::filesystem::path TempDir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / name;
  std::filesystem::remove_all(dir);
  return dir;
}

constexpr char kSmall[] = R"({
  "seed": 5,
  "dataset": {"dim": 8},
  "model": {"hidden": [16]},
  "federation": {"n_user": 4, "samples_per_user": 120},
  "fl": {"rounds": 3},
  "attack": {"x": 2, "aux_per_class": 30, "shadow_epochs": 2,
             "meta": {"epochs": 40}},
  "eval": {"test_per_class": 20}
})";

TEST(ConfigTest, MinimalConfigGetsDefaults) {
  ExperimentConfig c = ValidateConfig("{}");
  EXPECT_EQ(c.attack.th_round, 3);
  EXPECT_EQ(c.attack.x, 4u);
  EXPECT_EQ(c.attack.alpha, 0.001);
  EXPECT_EQ(c.fl.n_rounds, 15);
  EXPECT_EQ(c.federation.n_user, 10u);
  EXPECT_EQ(c.attack.aux_per_class, 150u);
  EXPECT_EQ(c.n_shadows(), 40u);
  EXPECT_EQ(c.fl.aggregation, fedsim::AggregationKind::kSelective);
}

TEST(ConfigTest, XAtLeastUserCountNamesKey) {
  EXPECT_THAT(ConfigErrorText(
                  R"({"federation": {"n_user": 5}, "attack": {"x": 5}})"),
              HasSubstr("attack.x"));
}

TEST(ConfigTest, UnknownKeysAreRejectedWithPath) {
  EXPECT_THAT(ConfigErrorText(R"({"foo": 1})"), HasSubstr("foo"));
  EXPECT_THAT(ConfigErrorText(R"({"attack": {"meta": {"depth": 2}}})"),
              HasSubstr("attack.meta.depth"));
}

TEST(ConfigTest, EveryViolationIsReported) {
  const std::string msg = ConfigErrorText(
      R"({"fl": {"rounds": 0}, "attack": {"alpha": -1, "th_round": 0}})");
  EXPECT_THAT(msg, HasSubstr("fl.rounds"));
  EXPECT_THAT(msg, HasSubstr("attack.alpha"));
  EXPECT_THAT(msg, HasSubstr("attack.th_round"));
}

TEST(ConfigTest, TypeErrorsNameTheKey) {
  EXPECT_THAT(ConfigErrorText(R"({"attack": {"x": "four"}})"),
              HasSubstr("attack.x"));
  EXPECT_THAT(ConfigErrorText("{not json"), HasSubstr("JSON"));
  EXPECT_THAT(ConfigErrorText(R"({"federation": {"n_user": -3}})"),
              HasSubstr("federation.n_user"));
}

TEST(ConfigTest, SignedJsonIntegersAreAcceptedForCounts) {
  const json j = {{"federation", {{"n_user", 12}}}, {"attack", {{"x", 4}}}};
  const ExperimentConfig c = ConfigFromJson(j);
  EXPECT_EQ(c.federation.n_user, 12u);
  EXPECT_EQ(c.attack.x, 4u);
}

TEST(ConfigTest, MissingIdxFilesAreRejected) {
  EXPECT_THAT(
      ConfigErrorText(R"({"dataset": {"kind": "idx",
                          "images": "/nonexistent/i", "labels": "/nonexistent/l"}})"),
      HasSubstr("dataset.images"));
}

TEST(ConfigTest, ResolvedJsonRoundTrips) {
  ExperimentConfig c = ValidateConfig(
      R"({"seed": 9, "federation": {"cp": [0.5, 0.7], "ud_target": 0.3},
          "fl": {"dp": {"clip_norm": 2, "noise_multiplier": 0.5}},
          "attack": {"mode": "minority", "algorithm": "centralized"},
          "defense": {"variants": [{"label": "a"}, {"label": "b", "dropout": true}]}})");
  const json j = c.ToJson();
  EXPECT_EQ(ConfigFromJson(j).ToJson(), j);
}

TEST(ConfigTest, EchoWrittenToOutputDir) {
  const auto dir = TempDir("ppa_harness_echo");
  json j = json::parse("{}");
  j["output_dir"] = dir.string();
  ValidateConfig(j.dump());
  std::ifstream in(dir / "config.json");
  ASSERT_TRUE(in.good());
  json echo = json::parse(in);
  EXPECT_EQ(echo.at("attack").at("th_round"), 3);
  std::filesystem::remove_all(dir);
}

TEST(ConfigTest, RunIdIgnoresOutputDir) {
  ExperimentConfig a = ValidateConfig(R"({"seed": 1})");
  ExperimentConfig b = a;
  b.output_dir = "/tmp/elsewhere";
  EXPECT_EQ(RunId(a), RunId(b));
  b.seed = 2;
  EXPECT_NE(RunId(a), RunId(b));
}

TEST(ExperimentTest, SameConfigSameReport) {
  ExperimentConfig c = ValidateConfig(kSmall);
  RunReport a = RunExperiment(c);
  RunReport b = RunExperiment(c);
  EXPECT_EQ(a.ToJson().dump(), b.ToJson().dump());
  EXPECT_EQ(a.users.size(), 4u);
  for (double v : {a.top1, a.top2, a.top3, a.utility_with, a.utility_without}) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
  EXPECT_EQ(a.rounds_run, 3);
}

TEST(ExperimentTest, PersistedRunIsReloadable) {
  const auto dir = TempDir("ppa_harness_run");
  ExperimentConfig c = ValidateConfig(kSmall);
  c.output_dir = dir;
  RunReport r = RunExperiment(c);
  for (const char* f : {"config.json", "report.json", "rounds.jsonl",
                        "meta.csv", "meta.ppam", "init.ppam"}) {
    EXPECT_TRUE(std::filesystem::exists(dir / f)) << f;
  }
  RunSummary s = LoadRun(dir);
  EXPECT_EQ(s.run_id, r.run_id);
  EXPECT_DOUBLE_EQ(s.TopK(1), r.top1);
  EXPECT_DOUBLE_EQ(s.TopK(3), r.top3);

  std::vector<RunSummary> runs = {s};
  std::vector<std::size_t> ks = {1, 2, 3};
  const auto out = TempDir("ppa_harness_report");
  WriteReport(runs, ks, out);
  std::ifstream summary(out / "summary.csv");
  std::string header;
  std::getline(summary, header);
  EXPECT_THAT(header, HasSubstr("top1,top2,top3"));
  std::ifstream ds(out / "ds_series.csv");
  std::stringstream body;
  body << ds.rdbuf();
  EXPECT_THAT(body.str(), HasSubstr("selective"));
  EXPECT_THAT(body.str(), HasSubstr("fedavg"));
  std::filesystem::remove_all(dir);
  std::filesystem::remove_all(out);
}

TEST(ExperimentTest, LoadRunOnEmptyDirIsIoError) {
  const auto dir = TempDir("ppa_harness_empty");
  std::filesystem::create_directories(dir);
  EXPECT_THROW(LoadRun(dir), IoError);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace ppa::harness
