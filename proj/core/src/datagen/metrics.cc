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

#include "ppa/datagen/metrics.h"

#include <algorithm>
#include <functional>
#include <numeric>

#include "ppa/common/error.h"

namespace ppa::datagen {

int PreferenceOf(std::span<const std::size_t> counts, PreferenceMode mode) {
  if (counts.empty()) throw InputError("empty class count vector");
  auto it = mode == PreferenceMode::kMajority
                ? std::max_element(counts.begin(), counts.end())
                : std::min_element(counts.begin(), counts.end());
  return static_cast<int>(it - counts.begin());
}

double ClassProportion(std::span<const std::size_t> counts,
                       PreferenceMode mode) {
  const std::size_t total =
      std::accumulate(counts.begin(), counts.end(), std::size_t{0});
  if (total == 0) return 0.0;
  const auto pref = static_cast<std::size_t>(PreferenceOf(counts, mode));
  return static_cast<double>(counts[pref]) / static_cast<double>(total);
}

double ClassDominance(std::span<const std::size_t> counts,
                      PreferenceMode mode) {
  const std::size_t total =
      std::accumulate(counts.begin(), counts.end(), std::size_t{0});
  if (total == 0 || counts.size() < 2) return 0.0;
  std::vector<std::size_t> sorted(counts.begin(), counts.end());
  if (mode == PreferenceMode::kMajority) {
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    if (sorted[1] == 0) return 0.0;
    return static_cast<double>(sorted[0] - sorted[1]) /
           static_cast<double>(total);
  }
  std::sort(sorted.begin(), sorted.end());
  return static_cast<double>(sorted[1] - sorted[0]) /
         static_cast<double>(total);
}

double UserDispersion(std::span<const int> preferences, std::size_t n_label) {
  if (preferences.empty() || n_label == 0) return 0.0;
  std::vector<std::size_t> users_per_class(n_label, 0);
  for (int p : preferences) {
    if (p < 0 || static_cast<std::size_t>(p) >= n_label) {
      throw InputError("preference class out of range");
    }
    ++users_per_class[static_cast<std::size_t>(p)];
  }
  const auto [lo, hi] =
      std::minmax_element(users_per_class.begin(), users_per_class.end());
  return static_cast<double>(*hi - *lo) /
         static_cast<double>(preferences.size());
}

double ImbalanceDegree(std::span<const std::size_t> sizes) {
  if (sizes.size() < 2) return 0.0;
  double mean = 0.0;
  for (std::size_t s : sizes) mean += static_cast<double>(s);
  mean /= static_cast<double>(sizes.size());
  double ss = 0.0;
  for (std::size_t s : sizes) {
    const double d = static_cast<double>(s) - mean;
    ss += d * d;
  }
  return ss / static_cast<double>(sizes.size() - 1);
}

FederationMetrics ComputeMetrics(std::span<const LabeledDataset> federation,
                                 PreferenceMode mode) {
  FederationMetrics m;
  if (federation.empty()) return m;
  std::vector<int> preferences;
  std::vector<std::size_t> sizes;
  const std::size_t n_label = federation.front().n_label();
  for (const LabeledDataset& d : federation) {
    const auto counts = d.ClassCounts();
    m.cp.push_back(ClassProportion(counts, mode));
    m.cd.push_back(ClassDominance(counts, mode));
    preferences.push_back(PreferenceOf(counts, mode));
    sizes.push_back(d.size());
  }
  m.ud = UserDispersion(preferences, n_label);
  m.id = ImbalanceDegree(sizes);
  return m;
}

}  // namespace ppa::datagen
