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

#ifndef PPA_DATAGEN_SYNTHETIC_H_
#define PPA_DATAGEN_SYNTHETIC_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "ppa/datagen/dataset.h"

namespace ppa::datagen {

struct SyntheticOptions {
  // Per-coordinate standard deviation of every class blob.
  double sigma = 1.0;
  // Lower bound on the Euclidean distance between any two class means.
  double min_mean_distance = 5.0;
};

// Class means for MakeSynthetic. With dim >= n_label the means sit on a
// scaled simplex (one randomly chosen axis per class, all pairwise distances
// equal to min_mean_distance); otherwise they are random directions on a
// sphere, redrawn until every pair is at least min_mean_distance apart.
std::vector<std::vector<double>> SyntheticClassMeans(
    std::size_t n_label, std::size_t dim, std::uint64_t seed,
    const SyntheticOptions& options = {});

// per_class isotropic Gaussian samples around each of `means`, class by
// class, with origins numbered from origin_offset. Pools drawn from the same
// means with distinct seeds and non-overlapping origin ranges are disjoint.
LabeledDataset SampleBlobs(const std::vector<std::vector<double>>& means,
                           std::size_t per_class, double sigma,
                           std::uint64_t seed, std::size_t origin_offset = 0);

// per_class_pool isotropic Gaussian samples around each class mean, stored
// class by class. Origins are the row indices. Throws InputError unless
// n_label >= 2 and dim >= 2.
LabeledDataset MakeSynthetic(std::size_t n_label, std::size_t dim,
                             std::size_t per_class_pool, std::uint64_t seed,
                             const SyntheticOptions& options = {});

}  // namespace ppa::datagen

#endif  // PPA_DATAGEN_SYNTHETIC_H_
