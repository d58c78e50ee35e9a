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

#ifndef PPA_HARNESS_EXPERIMENT_H_
#define PPA_HARNESS_EXPERIMENT_H_

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "ppa/attack/attacker.h"
#include "ppa/attack/meta.h"
#include "ppa/attack/shadow.h"
#include "ppa/datagen/auxiliary.h"
#include "ppa/datagen/metrics.h"
#include "ppa/datagen/partition.h"
#include "ppa/defense/defense.h"
#include "ppa/fedsim/simulator.h"
#include "ppa/harness/config.h"
#include "ppa/nn/architecture.h"
#include "ppa/nn/param_vector.h"

namespace ppa::harness {

// Everything built before the first FL round.
struct PreparedExperiment {
  nn::Architecture arch;
  nn::ParamVector init;
  datagen::FederationSpec spec;
  datagen::Federation federation;
  datagen::AuxiliaryStore aux;
  datagen::LabeledDataset test;
  std::vector<attack::ShadowRecord> shadows;
  std::vector<attack::MetaSample> meta_samples;
  std::optional<attack::MetaClassifier> meta;
};

// Builds the data, architecture and initial global model.
PreparedExperiment PrepareData(const ExperimentConfig& cfg);
// Offline phase: shadow models, meta data and the meta-classifier.
void TrainShadowStage(const ExperimentConfig& cfg, PreparedExperiment& p);
void TrainMetaStage(const ExperimentConfig& cfg, PreparedExperiment& p);
// All three stages.
PreparedExperiment Prepare(const ExperimentConfig& cfg);

struct UserResult {
  std::size_t user = 0;
  int true_class = 0;
  std::vector<std::size_t> class_counts;
  int predicted = -1;  // -1 when never profiled
  std::vector<int> ranking;
  std::optional<int> lock_round;
  bool top1 = false;
  bool top2 = false;
  bool top3 = false;
};

struct RunReport {
  std::string run_id;
  nlohmann::json config;
  int rounds_run = 0;
  std::vector<UserResult> users;
  double top1 = 0.0;
  double top2 = 0.0;
  double top3 = 0.0;
  // Mean test accuracy of the users' final models with the configured
  // aggregation, and under plain FedAvg for the same rounds and seeds.
  double utility_with = 0.0;
  double utility_without = 0.0;
  // Top-1 accuracy of the same profiler riding on the plain FedAvg run.
  double baseline_top1 = 0.0;
  double meta_train_accuracy = 0.0;
  datagen::FederationMetrics federation_metrics;
  // (round, mean DS at the previous candidate class).
  std::vector<std::pair<int, double>> ds_attack;
  std::vector<std::pair<int, double>> ds_fedavg;
  std::vector<attack::TraceEntry> trace;

  nlohmann::json ToJson() const;
};

// 12 hex digits derived from the resolved config (which includes the seed).
std::string RunId(const ExperimentConfig& cfg);

// FL rounds with the attacker, followed by the matched FedAvg baseline.
// With a non-null `log`, appends the attack run's round records.
RunReport RunAttackPhase(const ExperimentConfig& cfg,
                         const PreparedExperiment& prepared,
                         std::vector<fedsim::RoundLogRecord>* log = nullptr);

// Prepare + attack phase; persists artifacts when cfg.output_dir is set.
// Errors are rethrown with the failing stage prepended.
RunReport RunExperiment(const ExperimentConfig& cfg);

// Writes config.json, report.json, rounds.jsonl, meta.csv, meta.ppam and
// init.ppam into cfg.output_dir.
void PersistRun(const ExperimentConfig& cfg, const PreparedExperiment& prepared,
                const RunReport& report,
                const std::vector<fedsim::RoundLogRecord>& log);

// One attack run per variant with identical seeds; the offline phase is
// shared. model_utility is the plain FedAvg model's test accuracy.
std::vector<defense::SweepRow> RunDefenseSweep(
    const ExperimentConfig& base, const defense::DefenseSweep& sweep,
    const PreparedExperiment* prepared = nullptr);

}  // namespace ppa::harness

#endif  // PPA_HARNESS_EXPERIMENT_H_
