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

#include "ppa/attack/topk.h"

#include <algorithm>
#include <numeric>
#include <set>

#include "ppa/common/error.h"

namespace ppa::attack {

std::vector<int> RankingFromCounts(std::span<const std::size_t> counts,
                                   datagen::PreferenceMode mode) {
  std::vector<int> order(counts.size());
  std::iota(order.begin(), order.end(), 0);
  const bool majority = mode == datagen::PreferenceMode::kMajority;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    const std::size_t ca = counts[static_cast<std::size_t>(a)];
    const std::size_t cb = counts[static_cast<std::size_t>(b)];
    return majority ? ca > cb : ca < cb;
  });
  return order;
}

bool TopKMatch(std::span<const int> predicted, std::span<const int> truth,
               std::size_t k) {
  if (k > predicted.size() || k > truth.size()) {
    throw InputError("k exceeds the ranking length");
  }
  const std::set<int> a(predicted.begin(), predicted.begin() + k);
  const std::set<int> b(truth.begin(), truth.begin() + k);
  return a == b;
}

bool TopKMatchCounts(std::span<const int> predicted,
                     std::span<const std::size_t> counts, std::size_t k,
                     datagen::PreferenceMode mode) {
  if (k > predicted.size() || k > counts.size()) {
    throw InputError("k exceeds the ranking length");
  }
  const std::set<int> chosen(predicted.begin(), predicted.begin() + k);
  if (chosen.size() != k) return false;
  const bool majority = mode == datagen::PreferenceMode::kMajority;
  for (int in : chosen) {
    if (in < 0 || static_cast<std::size_t>(in) >= counts.size()) return false;
    for (std::size_t out = 0; out < counts.size(); ++out) {
      if (chosen.contains(static_cast<int>(out))) continue;
      const std::size_t ci = counts[static_cast<std::size_t>(in)];
      if (majority ? ci < counts[out] : ci > counts[out]) return false;
    }
  }
  return true;
}

double TopKAccuracy(std::span<const std::vector<int>> predicted,
                    std::span<const std::vector<int>> truth, std::size_t k) {
  if (predicted.size() != truth.size()) {
    throw InputError("prediction and truth lists differ in size");
  }
  if (predicted.empty()) return 0.0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    if (TopKMatch(predicted[i], truth[i], k)) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(predicted.size());
}

}  // namespace ppa::attack
