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

#include "ppa/attack/selective.h"

#include <algorithm>
#include <numeric>

#include "ppa/common/error.h"

namespace ppa::attack {

int CandidateClass(std::span<const double> s, datagen::PreferenceMode mode) {
  if (s.empty()) throw InputError("empty sensitivity vector");
  auto it = mode == datagen::PreferenceMode::kMajority
                ? std::min_element(s.begin(), s.end())
                : std::max_element(s.begin(), s.end());
  return static_cast<int>(it - s.begin());
}

std::vector<std::size_t> SelectPartners(
    std::size_t target, std::span<const SensitivityVector> sensitivities,
    std::span<const std::size_t> candidates, std::size_t x,
    datagen::PreferenceMode mode) {
  if (target >= sensitivities.size()) {
    throw InputError("target user out of range");
  }
  const auto c =
      static_cast<std::size_t>(CandidateClass(sensitivities[target], mode));
  std::vector<std::size_t> others;
  for (std::size_t u : candidates) {
    if (u != target) others.push_back(u);
  }
  const bool majority = mode == datagen::PreferenceMode::kMajority;
  std::sort(others.begin(), others.end(), [&](std::size_t a, std::size_t b) {
    const double va = sensitivities[a].at(c);
    const double vb = sensitivities[b].at(c);
    if (va != vb) return majority ? va > vb : va < vb;
    return a < b;
  });
  others.resize(std::min(x, others.size()));
  return others;
}

std::vector<std::size_t> SelectPartners(
    std::size_t target, std::span<const SensitivityVector> sensitivities,
    std::size_t x, datagen::PreferenceMode mode) {
  std::vector<std::size_t> all(sensitivities.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return SelectPartners(target, sensitivities, all, x, mode);
}

}  // namespace ppa::attack
