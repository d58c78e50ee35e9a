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

#include "ppa/attack/sensitivity.h"

#include <cmath>
#include <string>

#include "ppa/common/error.h"
#include "ppa/nn/engine.h"

namespace ppa::attack {
namespace {

void CheckAux(const nn::Architecture& arch,
              const datagen::AuxiliaryStore& aux) {
  if (aux.n_label() != arch.n_classes()) {
    throw InputError("auxiliary store has " + std::to_string(aux.n_label()) +
                     " classes, model has " +
                     std::to_string(arch.n_classes()));
  }
  for (std::size_t c = 0; c < aux.n_label(); ++c) {
    if (aux.per_class[c].empty()) {
      throw InputError("auxiliary subset of class " + std::to_string(c) +
                       " is empty");
    }
  }
}

nn::GradientVector ClassGradient(const nn::ParamVector& model,
                                 const nn::Architecture& arch,
                                 const datagen::LabeledDataset& subset) {
  const auto refs = subset.Refs();
  return nn::Backward(model, arch, refs);
}

}  // namespace

SensitivityVector ExtractSensitivity(const nn::ParamVector& model,
                                     const nn::Architecture& arch,
                                     const datagen::AuxiliaryStore& aux,
                                     double alpha) {
  if (!(alpha > 0.0)) throw ConfigError("sensitivity alpha must be > 0");
  CheckAux(arch, aux);
  const std::size_t layer = arch.feature_layer();
  const auto before = model.LayerValues(layer);
  SensitivityVector s(aux.n_label(), 0.0);
  for (std::size_t c = 0; c < aux.n_label(); ++c) {
    const nn::GradientVector g = ClassGradient(model, arch, aux.per_class[c]);
    const nn::ParamVector retrained = nn::SgdStep(model, g, alpha);
    const auto after = retrained.LayerValues(layer);
    double sum = 0.0;
    for (std::size_t i = 0; i < before.size(); ++i) {
      sum += std::abs((before[i] - after[i]) / alpha);
    }
    s[c] = sum;
  }
  return s;
}

SensitivityVector GradientSensitivity(const nn::ParamVector& model,
                                      const nn::Architecture& arch,
                                      const datagen::AuxiliaryStore& aux) {
  CheckAux(arch, aux);
  const std::size_t layer = arch.feature_layer();
  SensitivityVector s(aux.n_label(), 0.0);
  for (std::size_t c = 0; c < aux.n_label(); ++c) {
    const nn::GradientVector g = ClassGradient(model, arch, aux.per_class[c]);
    for (double v : g.LayerValues(layer)) s[c] += std::abs(v);
  }
  return s;
}

SensitivityVector DifferentialSensitivity(std::span<const double> s_agg_prev,
                                          std::span<const double> s_now) {
  if (s_agg_prev.size() != s_now.size()) {
    throw InputError("differential sensitivity: lengths " +
                     std::to_string(s_agg_prev.size()) + " and " +
                     std::to_string(s_now.size()) + " differ");
  }
  SensitivityVector ds(s_now.size());
  for (std::size_t i = 0; i < ds.size(); ++i) {
    ds[i] = std::abs(s_agg_prev[i] - s_now[i]);
  }
  return ds;
}

}  // namespace ppa::attack
