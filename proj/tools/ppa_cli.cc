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

// ppa: command-line front end for the attack laboratory.
//
//   ppa run --config exp.json [--seed N] [--out DIR]
//   ppa shadow-train | meta-train | defense-sweep  (same flags)
//   ppa report RUN_DIR... [--k 1,2,3] [--out DIR]
//
// Exit codes: 0 success, 1 configuration error, 2 runtime failure.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ppa/attack/meta.h"
#include "ppa/common/error.h"
#include "ppa/defense/defense.h"
#include "ppa/harness/config.h"
#include "ppa/harness/experiment.h"
#include "ppa/harness/report.h"
#include "ppa/nn/checkpoint.h"

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

struct CommonFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
};

void AddCommonFlags(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config, "Experiment config (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--seed", flags.seed, "Override the root seed");
  cmd->add_option("--out", flags.out, "Override the output directory");
}

ppa::harness::ExperimentConfig Resolve(const CommonFlags& flags) {
  std::ifstream in(flags.config);
  if (!in) throw ppa::ConfigError("cannot read " + flags.config);
  std::stringstream ss;
  ss << in.rdbuf();
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(ss.str(), nullptr, true, /*ignore_comments=*/true);
  } catch (const nlohmann::json::parse_error& e) {
    throw ppa::ConfigError(flags.config + ": " + e.what());
  }
  if (!j.is_object()) throw ppa::ConfigError(flags.config + ": not an object");
  if (flags.seed) j["seed"] = *flags.seed;
  if (!flags.out.empty()) j["output_dir"] = flags.out;
  ppa::harness::ExperimentConfig cfg = ppa::harness::ConfigFromJson(j);
  if (!cfg.output_dir.empty()) ppa::harness::WriteResolvedConfig(cfg);
  return cfg;
}

void SaveShadows(const ppa::harness::ExperimentConfig& cfg,
                 const ppa::harness::PreparedExperiment& p) {
  if (cfg.output_dir.empty()) return;
  const auto dir = cfg.output_dir / "shadows";
  std::filesystem::create_directories(dir);
  nlohmann::json index = nlohmann::json::array();
  for (std::size_t i = 0; i < p.shadows.size(); ++i) {
    const auto& s = p.shadows[i];
    const std::string name = "shadow_" + std::to_string(i) + ".ppam";
    ppa::nn::SaveCheckpoint(dir / name, p.arch, s.params);
    index.push_back({{"checkpoint", name},
                     {"preference", s.preference},
                     {"class_counts", s.dataset.ClassCounts()},
                     {"sensitivity", s.sensitivity}});
  }
  std::ofstream out(dir / "index.json");
  out << index.dump(2) << '\n';
}

int ShadowTrain(const CommonFlags& flags) {
  const auto cfg = Resolve(flags);
  auto p = ppa::harness::PrepareData(cfg);
  ppa::harness::TrainShadowStage(cfg, p);
  SaveShadows(cfg, p);
  std::printf("trained %zu shadow models\n", p.shadows.size());
  return 0;
}

int MetaTrain(const CommonFlags& flags) {
  const auto cfg = Resolve(flags);
  const auto p = ppa::harness::Prepare(cfg);
  SaveShadows(cfg, p);
  if (!cfg.output_dir.empty()) {
    ppa::attack::WriteMetaCsv(cfg.output_dir / "meta.csv", p.meta_samples);
    p.meta->Save(cfg.output_dir / "meta.ppam");
  }
  std::printf("meta samples: %zu  train accuracy: %.4f\n",
              p.meta_samples.size(), p.meta->train_accuracy());
  return 0;
}

int Run(const CommonFlags& flags) {
  const auto cfg = Resolve(flags);
  const auto r = ppa::harness::RunExperiment(cfg);
  std::printf("run %s  rounds %d\n", r.run_id.c_str(), r.rounds_run);
  std::printf("top1 %.4f  top2 %.4f  top3 %.4f\n", r.top1, r.top2, r.top3);
  std::printf("utility with attack %.4f  without %.4f\n", r.utility_with,
              r.utility_without);
  return 0;
}

int DefenseSweep(const CommonFlags& flags) {
  const auto cfg = Resolve(flags);
  const auto sweep = cfg.defense.value_or(ppa::defense::StandardSweep());
  const auto rows = ppa::harness::RunDefenseSweep(cfg, sweep);
  std::printf("%-12s %8s %10s %10s\n", "label", "noise", "attack@1", "utility");
  for (const auto& r : rows) {
    std::printf("%-12s %8.3f %10.4f %10.4f\n", r.label.c_str(),
                r.noise_multiplier, r.attack_acc_top1, r.model_utility);
  }
  return 0;
}

int Report(const std::vector<std::string>& dirs,
           const std::vector<std::size_t>& ks, const std::string& out) {
  std::vector<ppa::harness::RunSummary> runs;
  for (const auto& d : dirs) runs.push_back(ppa::harness::LoadRun(d));
  std::cout << ppa::harness::WriteReport(runs, ks, out.empty() ? "." : out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Preference profiling attack laboratory"};
  app.require_subcommand(1);

  CommonFlags shadow_flags, meta_flags, run_flags, sweep_flags;
  auto* shadow = app.add_subcommand("shadow-train", "Train shadow models");
  AddCommonFlags(shadow, shadow_flags);
  auto* meta = app.add_subcommand("meta-train",
                                  "Train shadows and the meta-classifier");
  AddCommonFlags(meta, meta_flags);
  auto* run = app.add_subcommand("run", "Full attack experiment");
  AddCommonFlags(run, run_flags);
  auto* sweep = app.add_subcommand("defense-sweep",
                                   "Attack accuracy under client defenses");
  AddCommonFlags(sweep, sweep_flags);

  std::vector<std::string> report_dirs;
  std::vector<std::size_t> ks = {1, 2, 3};
  std::string report_out;
  auto* report = app.add_subcommand("report", "Tabulate completed runs");
  report->add_option("runs", report_dirs, "Run directories")->required();
  report->add_option("--k", ks, "Top-k values")->delimiter(',');
  report->add_option("--out", report_out, "Directory for the CSV outputs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*shadow) return ShadowTrain(shadow_flags);
    if (*meta) return MetaTrain(meta_flags);
    if (*run) return Run(run_flags);
    if (*sweep) return DefenseSweep(sweep_flags);
    if (*report) return Report(report_dirs, ks, report_out);
  } catch (const ppa::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitRuntime;
  }
  return kExitRuntime;
}
