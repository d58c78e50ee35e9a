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

#ifndef PPA_HARNESS_CONFIG_H_
#define PPA_HARNESS_CONFIG_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ppa/attack/attacker.h"
#include "ppa/attack/meta.h"
#include "ppa/datagen/partition.h"
#include "ppa/defense/defense.h"
#include "ppa/fedsim/simulator.h"
#include "ppa/nn/architecture.h"

namespace ppa::harness {

enum class DatasetKind { kSynthetic, kIdx };
enum class MetaAlgorithm { kCentralized, kFederated };

struct DatasetConfig {
  DatasetKind kind = DatasetKind::kSynthetic;
  std::size_t n_label = 10;
  // synthetic
  std::size_t dim = 16;
  double sigma = 1.0;
  double separation = 5.0;
  // idx
  std::filesystem::path images;
  std::filesystem::path labels;
};

struct ModelConfig {
  std::vector<std::size_t> hidden = {32, 32};
  double dropout_rate = 0.5;
  // Explicit architecture descriptor; overrides hidden/dropout_rate.
  std::optional<nlohmann::json> architecture;
};

struct AttackSettings {
  double alpha = 0.001;
  int th_round = 3;
  // Locked users receive the plain FedAvg model from then on.
  bool release_locked = true;
  std::size_t x = 4;
  datagen::PreferenceMode mode = datagen::PreferenceMode::kMajority;
  std::size_t n_shadows = 0;  // 0 means 4 * n_label
  std::size_t aux_per_class = 150;
  MetaAlgorithm algorithm = MetaAlgorithm::kFederated;
  // Features fed to the meta-classifier during FL. Both algorithms see the
  // same online pipeline by default; only the offline meta-data differs.
  attack::MetaFeatures online_features = attack::MetaFeatures::kDifferential;
  int shadow_epochs = 5;
  std::size_t shadow_size = 0;  // 0 derives it from aux_per_class
  double shadow_learning_rate = 0.05;
  // Shadow cp/cd ranges; unset copies the federation's.
  std::optional<std::pair<double, double>> shadow_cp;
  std::optional<std::pair<double, double>> shadow_cd;
  attack::MetaTrainConfig meta;
};

struct ExperimentConfig {
  std::uint64_t seed = 0;
  std::filesystem::path output_dir;
  DatasetConfig dataset;
  ModelConfig model;
  datagen::FederationParams federation;
  fedsim::FlConfig fl;
  // Ends the FL run once every user is locked.
  bool early_stop = false;
  AttackSettings attack;
  std::optional<defense::DefenseSweep> defense;
  std::size_t test_per_class = 100;

  std::size_t n_shadows() const {
    return attack.n_shadows != 0 ? attack.n_shadows : 4 * dataset.n_label;
  }
  nn::Architecture BuildArchitecture() const;
  attack::AttackerConfig Attacker() const;
  // Fully resolved config; ConfigFromJson(ToJson()) reproduces it.
  nlohmann::json ToJson() const;
};

// Parses and validates a config object. Every violated invariant and
// unknown key is reported, one per line, in a single ConfigError.
ExperimentConfig ConfigFromJson(const nlohmann::json& j);

// Parses JSON text (comments allowed) and validates it. When output_dir is
// set, the resolved config is written there as config.json.
ExperimentConfig ValidateConfig(const std::string& text);
ExperimentConfig LoadConfig(const std::filesystem::path& path);

// Writes output_dir/config.json, creating the directory.
void WriteResolvedConfig(const ExperimentConfig& cfg);

}  // namespace ppa::harness

#endif  // PPA_HARNESS_CONFIG_H_
