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

#ifndef PPA_DATAGEN_AUXILIARY_H_
#define PPA_DATAGEN_AUXILIARY_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ppa/datagen/dataset.h"

namespace ppa::datagen {

// The attacker's public samples, split by class: per_class[t] holds only
// label-t samples.
struct AuxiliaryStore {
  std::vector<LabeledDataset> per_class;
  std::size_t samples_per_class = 0;

  std::size_t n_label() const { return per_class.size(); }
  // All classes concatenated in class order.
  LabeledDataset Merged() const;
  std::vector<std::size_t> Origins() const;
};

// Draws samples_per_class rows of every class from `pool`, skipping rows
// whose origin is excluded. Throws InputError if any class runs short.
AuxiliaryStore BuildAuxiliary(const LabeledDataset& pool,
                              std::size_t samples_per_class,
                              std::span<const std::size_t> excluded_origins,
                              std::uint64_t seed);

}  // namespace ppa::datagen

#endif  // PPA_DATAGEN_AUXILIARY_H_
