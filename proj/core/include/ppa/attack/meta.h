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

#ifndef PPA_ATTACK_META_H_
#define PPA_ATTACK_META_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "ppa/attack/sensitivity.h"
#include "ppa/attack/shadow.h"
#include "ppa/datagen/auxiliary.h"
#include "ppa/datagen/partition.h"
#include "ppa/nn/architecture.h"
#include "ppa/nn/param_vector.h"
#include "ppa/nn/train.h"

namespace ppa::attack {

// One meta-classifier training example.
struct MetaSample {
  std::vector<double> features;
  int label = 0;
  // Optional class proportions of the source dataset. When present, the
  // classifier is fit to them as soft targets so its score ranking follows
  // the class ranking, not just the preference.
  std::vector<double> target;
  friend bool operator==(const MetaSample&, const MetaSample&) = default;
};

// One sample per shadow: its sensitivity, labelled with its preference.
std::vector<MetaSample> BuildMetaDatasetCentralized(
    std::span<const ShadowRecord> shadows);

// Index of the shadow paired with shadow i: among the others, the largest
// sensitivity at shadow i's preference class (smallest in minority mode),
// ties to the lower index.
std::size_t SelectShadowPartner(std::size_t i,
                                std::span<const ShadowRecord> shadows,
                                datagen::PreferenceMode mode);

// For each shadow i: average it with its partner (equal weights), extract
// S1, retrain the average for one epoch on shadow i's dataset, extract S2,
// emit (|S1 - S2|, mc_i). Throws ConfigError for fewer than two shadows.
std::vector<MetaSample> BuildMetaDatasetFederated(
    std::span<const ShadowRecord> shadows, const nn::Architecture& arch,
    const datagen::AuxiliaryStore& aux, double alpha,
    const nn::TrainConfig& retrain, datagen::PreferenceMode mode);

struct MetaTrainConfig {
  std::size_t hidden = 32;
  // Soft targets are approximated by this many label copies per sample,
  // split by proportion (largest remainder). 0 trains on hard labels.
  std::size_t target_resolution = 20;
  double learning_rate = 0.1;
  int epochs = 200;
  std::size_t batch_size = 16;
  std::uint64_t seed = 0;
  // When false, samples need not cover every class.
  bool require_full_coverage = true;
};

// Scales a feature vector by its maximum (all zeros stay zeros).
std::vector<double> NormalizeFeatures(std::span<const double> features);

// N_label -> hidden -> N_label perceptron over normalised features.
class MetaClassifier {
 public:
  MetaClassifier(nn::Architecture arch, nn::ParamVector params,
                 double train_accuracy = 0.0);

  const nn::Architecture& arch() const { return arch_; }
  const nn::ParamVector& params() const { return params_; }
  std::size_t n_label() const { return arch_.n_classes(); }
  double train_accuracy() const { return train_accuracy_; }

  // Class probabilities for raw (unnormalised) features.
  std::vector<double> Scores(std::span<const double> features) const;
  int Predict(std::span<const double> features) const;
  // Every class ordered by decreasing score, ties to the lower index.
  std::vector<int> Ranking(std::span<const double> features) const;

  void Save(const std::filesystem::path& path) const;
  static MetaClassifier Load(const std::filesystem::path& path);

 private:
  nn::Architecture arch_;
  nn::ParamVector params_;
  double train_accuracy_ = 0.0;
};

// Fits a classifier on `samples`. A single distinct label yields a constant
// classifier for that label. Throws ConfigError with fewer than n_label
// samples or (with require_full_coverage) a class without samples.
MetaClassifier TrainMeta(std::span<const MetaSample> samples,
                         std::size_t n_label, const MetaTrainConfig& cfg);

// CSV with columns f0..f{N-1},label. Soft targets are not exported.
void WriteMetaCsv(const std::filesystem::path& path,
                  std::span<const MetaSample> samples);
std::vector<MetaSample> ReadMetaCsv(const std::filesystem::path& path);

}  // namespace ppa::attack

#endif  // PPA_ATTACK_META_H_
