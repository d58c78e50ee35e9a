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

#ifndef PPA_DATAGEN_PARTITION_H_
#define PPA_DATAGEN_PARTITION_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "ppa/datagen/dataset.h"

namespace ppa::datagen {

// Whether the profiled preference is the most or the least frequent class.
enum class PreferenceMode { kMajority, kMinority };

std::string_view PreferenceModeName(PreferenceMode mode);
// Throws ConfigError for anything but "majority" / "minority".
PreferenceMode ParsePreferenceMode(std::string_view name);

// Target class make-up of one dataset.
//
// Majority mode: the preference class gets round(cp * total) samples, the
// second class round(cp * total) - round(cd * total). Minority mode mirrors
// this: the preference class gets round(cp * total), the second class
// round(cp * total) + round(cd * total). The remaining samples are spread
// evenly over the other n_label - 2 classes, remainder to the lowest indices.
// cp == 1 puts every sample in the preference class.
struct DistributionSpec {
  std::size_t n_label = 10;
  std::size_t total_size = 0;
  double cp = 0.5;
  double cd = 0.0;
  int preference_class = 0;
  // Defaults to (preference_class + 1) % n_label.
  std::optional<int> second_class;
  PreferenceMode mode = PreferenceMode::kMajority;
};

// Per-class sample counts for the distribution. Throws ConfigError when a count
// would be negative or the preference class would lose its extreme rank.
std::vector<std::size_t> AllocateClassCounts(const DistributionSpec& spec);

// True when the evenly spread classes stay on the far side of the second
// class, i.e. the measured CD equals the requested one.
bool CdIsRealizable(const DistributionSpec& spec);

// Samples the exact per-class counts from `pool` without replacement, never
// touching rows whose origin is in `excluded_origins` (sorted or not).
// Throws InputError if a class runs short.
LabeledDataset RealizeCounts(const LabeledDataset& pool,
                             std::span<const std::size_t> counts,
                             std::uint64_t seed,
                             std::span<const std::size_t> excluded_origins = {});

LabeledDataset RealizeDistribution(
    const LabeledDataset& pool, const DistributionSpec& spec,
    std::uint64_t seed, std::span<const std::size_t> excluded_origins = {});

struct FederationSpec {
  std::size_t n_user = 0;
  std::vector<DistributionSpec> users;
  std::optional<double> ud_target;
  std::optional<double> id_target;
};

// Ranges a federation is drawn from. cp and cd are drawn uniformly from
// their ranges, redrawing the pair until the counts are non-negative and the
// preference class keeps its rank.
struct FederationParams {
  std::size_t n_user = 10;
  std::size_t n_label = 10;
  std::size_t samples_per_user = 600;
  double cp_min = 0.4;
  double cp_max = 0.6;
  double cd_min = 0.4;
  double cd_max = 0.6;
  PreferenceMode mode = PreferenceMode::kMajority;
  // Steers how preference classes are shared between users; unset draws
  // each user's class uniformly.
  std::optional<double> ud_target;
  // Sample variance of the per-user dataset sizes; unset gives equal sizes.
  std::optional<double> id_target;
};

FederationSpec MakeFederationSpec(const FederationParams& params,
                                  std::uint64_t seed);

// Preference-class multiplicities (indexed by class) whose user dispersion is
// closest to ud_target.
std::vector<std::size_t> PreferenceMultiplicities(std::size_t n_user,
                                                  std::size_t n_label,
                                                  double ud_target);

// Integer dataset sizes around `base` whose sample variance approximates
// id_target: sizes alternate base + s, base - s (a trailing odd user gets
// base) with s = sqrt(id_target * (n - 1) / (2 * floor(n / 2))).
std::vector<std::size_t> SizesForImbalance(std::size_t n_user,
                                           std::size_t base,
                                           double id_target);

struct Federation {
  std::vector<LabeledDataset> clients;
  // Sorted origins of every row handed to any client.
  std::vector<std::size_t> used_origins;
};

// Realises every user spec from `pool`; clients are mutually disjoint and
// avoid `excluded_origins`. User u draws with sub-seed (seed, u).
Federation RealizeFederation(const LabeledDataset& pool,
                             const FederationSpec& spec, std::uint64_t seed,
                             std::span<const std::size_t> excluded_origins = {});

}  // namespace ppa::datagen

#endif  // PPA_DATAGEN_PARTITION_H_
