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

#ifndef PPA_NN_TRAIN_H_
#define PPA_NN_TRAIN_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>

#include "ppa/common/rng.h"
#include "ppa/datagen/dataset.h"
#include "ppa/defense/dp_config.h"
#include "ppa/nn/architecture.h"
#include "ppa/nn/param_vector.h"

namespace ppa::nn {

struct TrainConfig {
  double learning_rate = 0.05;
  int epochs = 1;
  std::size_t batch_size = 32;
  // Activates the architecture's dropout layers during training.
  bool dropout_enabled = false;
  std::optional<defense::DpConfig> dp;
  std::uint64_t seed = 0;

  // Throws ConfigError on a non-positive rate/batch or negative epochs.
  void Validate() const;
};

// Mini-batch SGD for cfg.epochs passes. Each epoch shuffles with a sub-seed
// of cfg.seed, so identical configs give bit-identical results. The trailing
// partial batch is kept. Throws InputError on an empty dataset or a batch
// size larger than the dataset.
ParamVector Train(const ParamVector& model, const Architecture& arch,
                  const datagen::LabeledDataset& data,
                  const TrainConfig& cfg);

// Clips every per-example gradient to `clip_norm`, averages, adds
// N(0, (noise_multiplier * clip_norm / n)^2) per coordinate, then steps.
// Throws InputError on an empty gradient list.
ParamVector DpSgdStep(const ParamVector& model,
                      std::span<const GradientVector> per_example_grads,
                      double clip_norm, double noise_multiplier, double lr,
                      Rng& rng);

// The clipped-and-noised mean gradient DpSgdStep applies.
GradientVector PrivatizeGradients(
    std::span<const GradientVector> per_example_grads, double clip_norm,
    double noise_multiplier, Rng& rng);

}  // namespace ppa::nn

#endif  // PPA_NN_TRAIN_H_
