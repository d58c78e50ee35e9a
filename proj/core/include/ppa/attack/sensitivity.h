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

#ifndef PPA_ATTACK_SENSITIVITY_H_
#define PPA_ATTACK_SENSITIVITY_H_

#include <span>
#include <vector>

#include "ppa/datagen/auxiliary.h"
#include "ppa/nn/architecture.h"
#include "ppa/nn/param_vector.h"

namespace ppa::attack {

// Per-class model sensitivity: N_label non-negative reals.
using SensitivityVector = std::vector<double>;

// For each class c, retrains a copy of `model` with one full-batch gradient
// step at rate `alpha` on aux.per_class[c] and sums |(theta - theta') /
// alpha| over the architecture's feature layer. `model` is not modified.
// Throws InputError on an empty class subset or a class-count mismatch,
// ConfigError on alpha <= 0.
SensitivityVector ExtractSensitivity(const nn::ParamVector& model,
                                     const nn::Architecture& arch,
                                     const datagen::AuxiliaryStore& aux,
                                     double alpha);

// The same quantity read straight off the gradient: sum |dL/dtheta| over
// the feature layer, per class.
SensitivityVector GradientSensitivity(const nn::ParamVector& model,
                                      const nn::Architecture& arch,
                                      const datagen::AuxiliaryStore& aux);

// Elementwise |s_agg_prev - s_now|. Throws InputError on a length mismatch.
SensitivityVector DifferentialSensitivity(std::span<const double> s_agg_prev,
                                          std::span<const double> s_now);

}  // namespace ppa::attack

#endif  // PPA_ATTACK_SENSITIVITY_H_
