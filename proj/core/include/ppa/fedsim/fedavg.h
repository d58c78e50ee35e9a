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

#ifndef PPA_FEDSIM_FEDAVG_H_
#define PPA_FEDSIM_FEDAVG_H_

#include <span>

#include "ppa/nn/param_vector.h"

namespace ppa::fedsim {

// Weighted model average sum_n (w_n / W) * theta_n with W = sum_n w_n.
//
// The reduction runs in a canonical order (by weight, then by parameter
// values), so any permutation of the (model, weight) pairs yields a
// bit-identical result. Throws InputError on an empty list, a size mismatch
// or a non-positive weight, InternalError on a layout mismatch.
nn::ParamVector FedAvg(std::span<const nn::ParamVector> models,
                       std::span<const double> weights);

// FedAvg with equal weights.
nn::ParamVector MeanModel(std::span<const nn::ParamVector> models);

}  // namespace ppa::fedsim

#endif  // PPA_FEDSIM_FEDAVG_H_
