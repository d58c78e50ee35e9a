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

#include "ppa/datagen/auxiliary.h"

#include <algorithm>

#include "ppa/datagen/partition.h"

namespace ppa::datagen {

LabeledDataset AuxiliaryStore::Merged() const {
  if (per_class.empty()) return {};
  LabeledDataset out(per_class.front().feature_shape(),
                     per_class.front().n_label());
  for (const LabeledDataset& d : per_class) out.Append(d);
  return out;
}

std::vector<std::size_t> AuxiliaryStore::Origins() const {
  std::vector<std::size_t> out;
  for (const LabeledDataset& d : per_class) {
    out.insert(out.end(), d.origins().begin(), d.origins().end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

AuxiliaryStore BuildAuxiliary(const LabeledDataset& pool,
                              std::size_t samples_per_class,
                              std::span<const std::size_t> excluded_origins,
                              std::uint64_t seed) {
  AuxiliaryStore store;
  store.samples_per_class = samples_per_class;
  const std::size_t n = pool.n_label();
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<std::size_t> counts(n, 0);
    counts[c] = samples_per_class;
    store.per_class.push_back(RealizeCounts(
        pool, counts, DeriveSeed(seed, "auxiliary", c), excluded_origins));
  }
  return store;
}

}  // namespace ppa::datagen
