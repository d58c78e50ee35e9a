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

#ifndef PPA_ATTACK_SHADOW_H_
#define PPA_ATTACK_SHADOW_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "ppa/attack/sensitivity.h"
#include "ppa/common/rng.h"
#include "ppa/datagen/auxiliary.h"
#include "ppa/datagen/dataset.h"
#include "ppa/datagen/partition.h"
#include "ppa/nn/architecture.h"
#include "ppa/nn/param_vector.h"
#include "ppa/nn/train.h"

namespace ppa::attack {

struct ShadowRecord {
  nn::ParamVector params;
  datagen::LabeledDataset dataset;
  int preference = 0;
  SensitivityVector sensitivity;
};

// Draws the distribution of shadow `index`.
using ShadowSpecSampler =
    std::function<datagen::DistributionSpec(std::size_t index, Rng& rng)>;

struct ShadowConfig {
  std::size_t n_shadows = 40;
  datagen::PreferenceMode mode = datagen::PreferenceMode::kMajority;
  double cp_min = 0.4;
  double cp_max = 0.6;
  double cd_min = 0.4;
  double cd_max = 0.6;
  // Samples per shadow; 0 picks the largest size the auxiliary store can
  // serve at cp_max.
  std::size_t dataset_size = 0;
  nn::TrainConfig train;
  double alpha = 0.001;
  // Overrides the default sampler, which forces preference index % N_label
  // and draws (cp, cd) uniformly from the ranges until feasible.
  ShadowSpecSampler sampler;
};

// The default sampler for `cfg` over `n_label` classes.
ShadowSpecSampler StratifiedSampler(const ShadowConfig& cfg,
                                    std::size_t n_label,
                                    std::size_t dataset_size);

// Trains cfg.n_shadows models from `init` on distributions realised from
// the auxiliary store and records their sensitivities. Resamples the specs
// until every class is some shadow's preference. Throws ConfigError when
// n_shadows < N_label or coverage cannot be reached.
std::vector<ShadowRecord> TrainShadows(const nn::ParamVector& init,
                                       const nn::Architecture& arch,
                                       const datagen::AuxiliaryStore& aux,
                                       const ShadowConfig& cfg,
                                       std::uint64_t seed);

}  // namespace ppa::attack

#endif  // PPA_ATTACK_SHADOW_H_
