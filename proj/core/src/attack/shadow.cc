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

#include "ppa/attack/shadow.h"

#include <algorithm>
#include <string>

#include "ppa/common/error.h"
#include "ppa/datagen/metrics.h"

namespace ppa::attack {

ShadowSpecSampler StratifiedSampler(const ShadowConfig& cfg,
                                    std::size_t n_label,
                                    std::size_t dataset_size) {
  return [cfg, n_label, dataset_size](std::size_t index, Rng& rng) {
    datagen::DistributionSpec d;
    d.n_label = n_label;
    d.total_size = dataset_size;
    d.mode = cfg.mode;
    d.preference_class = static_cast<int>(index % n_label);
    int second = static_cast<int>(rng.UniformIndex(n_label - 1));
    if (second >= d.preference_class) ++second;
    d.second_class = second;
    for (int attempt = 0; attempt < 10000; ++attempt) {
      d.cp = rng.Uniform(cfg.cp_min, cfg.cp_max);
      d.cd = rng.Uniform(cfg.cd_min, cfg.cd_max);
      try {
        datagen::AllocateClassCounts(d);
        return d;
      } catch (const ConfigError&) {
      }
    }
    throw ConfigError("shadow sampler found no feasible (cp, cd) pair");
  };
}

std::vector<ShadowRecord> TrainShadows(const nn::ParamVector& init,
                                       const nn::Architecture& arch,
                                       const datagen::AuxiliaryStore& aux,
                                       const ShadowConfig& cfg,
                                       std::uint64_t seed) {
  const std::size_t n_label = arch.n_classes();
  if (cfg.n_shadows < n_label) {
    throw ConfigError("attack.n_shadows (" + std::to_string(cfg.n_shadows) +
                      ") cannot cover " + std::to_string(n_label) +
                      " classes");
  }
  if (aux.n_label() != n_label) {
    throw InputError("auxiliary store class count differs from the model's");
  }
  std::size_t size = cfg.dataset_size;
  if (size == 0) {
    const double cap = cfg.mode == datagen::PreferenceMode::kMajority
                           ? cfg.cp_max
                           : 1.5 / static_cast<double>(n_label);
    size = static_cast<std::size_t>(
        static_cast<double>(aux.samples_per_class) / cap);
  }
  const ShadowSpecSampler sampler =
      cfg.sampler ? cfg.sampler : StratifiedSampler(cfg, n_label, size);

  std::vector<datagen::DistributionSpec> specs;
  bool covered = false;
  for (int attempt = 0; attempt < 100 && !covered; ++attempt) {
    Rng rng(DeriveSeed(seed, "shadow-specs",
                       static_cast<std::uint64_t>(attempt)));
    specs.clear();
    std::vector<bool> seen(n_label, false);
    for (std::size_t i = 0; i < cfg.n_shadows; ++i) {
      specs.push_back(sampler(i, rng));
      seen[static_cast<std::size_t>(specs.back().preference_class)] = true;
    }
    covered = std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
  }
  if (!covered) {
    throw ConfigError("shadow specs never covered every preference class");
  }

  const datagen::LabeledDataset pool = aux.Merged();
  std::vector<ShadowRecord> shadows;
  shadows.reserve(specs.size());
  for (std::size_t i = 0; i < specs.size(); ++i) {
    ShadowRecord r;
    r.dataset =
        datagen::RealizeDistribution(pool, specs[i], DeriveSeed(seed, "shadow-data", i));
    r.preference = datagen::PreferenceOf(r.dataset.ClassCounts(), cfg.mode);
    if (r.preference != specs[i].preference_class) {
      throw InternalError("shadow " + std::to_string(i) +
                          " realised preference " +
                          std::to_string(r.preference) + ", spec asked for " +
                          std::to_string(specs[i].preference_class));
    }
    nn::TrainConfig tc = cfg.train;
    tc.seed = DeriveSeed(seed, "shadow-train", i);
    tc.batch_size = std::min(tc.batch_size, r.dataset.size());
    r.params = nn::Train(init, arch, r.dataset, tc);
    r.sensitivity = ExtractSensitivity(r.params, arch, aux, cfg.alpha);
    shadows.push_back(std::move(r));
  }
  return shadows;
}

}  // namespace ppa::attack
