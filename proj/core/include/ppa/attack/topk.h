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

#ifndef PPA_ATTACK_TOPK_H_
#define PPA_ATTACK_TOPK_H_

#include <cstddef>
#include <span>
#include <vector>

#include "ppa/datagen/partition.h"

namespace ppa::attack {

// Classes ordered by decreasing count (increasing in minority mode), ties
// to the lower index.
std::vector<int> RankingFromCounts(std::span<const std::size_t> counts,
                                   datagen::PreferenceMode mode);

// True iff the first k entries of both rankings form the same set.
bool TopKMatch(std::span<const int> predicted, std::span<const int> truth,
               std::size_t k);

// Tie-aware variant against class counts: true iff the predicted top-k are
// distinct and each of them is ranked at least as high as every class left
// out, so any tie-break of the counts could have produced the set.
bool TopKMatchCounts(std::span<const int> predicted,
                     std::span<const std::size_t> counts, std::size_t k,
                     datagen::PreferenceMode mode);

// Fraction of users whose top-k sets match. Throws InputError when k
// exceeds a ranking's length or the lists differ in size; 0 for no users.
double TopKAccuracy(std::span<const std::vector<int>> predicted,
                    std::span<const std::vector<int>> truth, std::size_t k);

}  // namespace ppa::attack

#endif  // PPA_ATTACK_TOPK_H_
