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

#include "ppa/fedsim/fedavg.h"

#include <algorithm>
#include <numeric>
#include <vector>

#include "ppa/common/error.h"

namespace ppa::fedsim {

nn::ParamVector FedAvg(std::span<const nn::ParamVector> models,
                       std::span<const double> weights) {
  if (models.empty()) throw InputError("fedavg: no models");
  if (models.size() != weights.size()) {
    throw InputError("fedavg: " + std::to_string(models.size()) +
                     " models but " + std::to_string(weights.size()) +
                     " weights");
  }
  for (double w : weights) {
    if (!(w > 0.0)) throw InputError("fedavg: weights must be positive");
  }
  for (const nn::ParamVector& m : models) {
    nn::RequireSameLayout(models.front().layout(), m.layout(), "fedavg");
  }

  std::vector<std::size_t> order(models.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (weights[a] != weights[b]) return weights[a] < weights[b];
    const auto va = models[a].values();
    const auto vb = models[b].values();
    return std::lexicographical_compare(va.begin(), va.end(), vb.begin(),
                                        vb.end());
  });

  double total = 0.0;
  for (std::size_t i : order) total += weights[i];
  // Offsets from the first model in canonical order; identical inputs then
  // reproduce that model exactly.
  nn::ParamVector out = models[order.front()];
  const auto base = models[order.front()].values();
  auto acc = out.values();
  for (std::size_t k = 1; k < order.size(); ++k) {
    const double share = weights[order[k]] / total;
    const auto v = models[order[k]].values();
    for (std::size_t p = 0; p < acc.size(); ++p) {
      acc[p] += share * (v[p] - base[p]);
    }
  }
  return out;
}

nn::ParamVector MeanModel(std::span<const nn::ParamVector> models) {
  const std::vector<double> weights(models.size(), 1.0);
  return FedAvg(models, weights);
}

}  // namespace ppa::fedsim
