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

#include "ppa/nn/train.h"

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "ppa/common/error.h"
#include "ppa/nn/engine.h"

namespace ppa::nn {

void TrainConfig::Validate() const {
  if (!(learning_rate > 0.0)) throw ConfigError("learning_rate must be > 0");
  if (epochs < 0) throw ConfigError("epochs must be >= 0");
  if (batch_size == 0) throw ConfigError("batch_size must be > 0");
  if (dp) dp->Validate();
}

ParamVector Train(const ParamVector& model, const Architecture& arch,
                  const datagen::LabeledDataset& data,
                  const TrainConfig& cfg) {
  cfg.Validate();
  if (data.empty()) throw InputError("cannot train on an empty dataset");
  if (cfg.batch_size > data.size()) {
    throw InputError("batch_size " + std::to_string(cfg.batch_size) +
                     " exceeds dataset size " + std::to_string(data.size()));
  }
  ParamVector current = model;
  std::vector<std::size_t> order(data.size());
  std::vector<SampleRef> batch;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng shuffle_rng(DeriveSeed(cfg.seed, "shuffle", epoch));
    shuffle_rng.Shuffle(std::span<std::size_t>(order));
    Rng dropout_rng(DeriveSeed(cfg.seed, "dropout", epoch));
    Rng noise_rng(DeriveSeed(cfg.seed, "dp-noise", epoch));
    Rng* masks = cfg.dropout_enabled ? &dropout_rng : nullptr;

    for (std::size_t start = 0; start < order.size();
         start += cfg.batch_size) {
      const std::size_t end = std::min(order.size(), start + cfg.batch_size);
      batch.clear();
      for (std::size_t k = start; k < end; ++k) {
        batch.push_back({data.features(order[k]), data.label(order[k])});
      }
      if (!cfg.dp) {
        GradientVector g =
            ForwardBackward(current, arch, batch, masks).gradient;
        current = SgdStep(current, g, cfg.learning_rate);
        continue;
      }
      std::vector<GradientVector> per_example;
      per_example.reserve(batch.size());
      for (const SampleRef& s : batch) {
        per_example.push_back(
            ForwardBackward(current, arch, Batch(&s, 1), masks).gradient);
      }
      current = DpSgdStep(current, per_example, cfg.dp->clip_norm,
                          cfg.dp->noise_multiplier, cfg.learning_rate,
                          noise_rng);
    }
  }
  return current;
}

GradientVector PrivatizeGradients(
    std::span<const GradientVector> per_example_grads, double clip_norm,
    double noise_multiplier, Rng& rng) {
  if (per_example_grads.empty()) {
    throw InputError("DP-SGD step needs at least one per-example gradient");
  }
  defense::DpConfig{clip_norm, noise_multiplier}.Validate();
  const ParamLayout& layout = per_example_grads.front().layout();
  GradientVector mean(layout);
  auto m = mean.values();
  for (const GradientVector& g : per_example_grads) {
    RequireSameLayout(layout, g.layout(), "DpSgdStep");
    const double norm = L2Norm(g.values());
    const double factor = norm > clip_norm ? clip_norm / norm : 1.0;
    auto v = g.values();
    for (std::size_t i = 0; i < v.size(); ++i) m[i] += factor * v[i];
  }
  const double n = static_cast<double>(per_example_grads.size());
  const double noise_std = noise_multiplier * clip_norm / n;
  for (double& x : m) {
    x /= n;
    if (noise_std > 0.0) x += rng.Normal(0.0, noise_std);
  }
  return mean;
}

ParamVector DpSgdStep(const ParamVector& model,
                      std::span<const GradientVector> per_example_grads,
                      double clip_norm, double noise_multiplier, double lr,
                      Rng& rng) {
  GradientVector g =
      PrivatizeGradients(per_example_grads, clip_norm, noise_multiplier, rng);
  return SgdStep(model, g, lr);
}

}  // namespace ppa::nn
