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

#include "ppa/datagen/partition.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ppa/common/error.h"
#include "ppa/common/rng.h"

namespace ppa::datagen {
namespace {

std::vector<std::size_t> SortedCopy(std::span<const std::size_t> v) {
  std::vector<std::size_t> out(v.begin(), v.end());
  std::sort(out.begin(), out.end());
  return out;
}

int SecondClassOf(const DistributionSpec& spec) {
  return spec.second_class.value_or(
      static_cast<int>((static_cast<std::size_t>(spec.preference_class) + 1) %
                       spec.n_label));
}

}  // namespace

std::string_view PreferenceModeName(PreferenceMode mode) {
  return mode == PreferenceMode::kMajority ? "majority" : "minority";
}

PreferenceMode ParsePreferenceMode(std::string_view name) {
  if (name == "majority") return PreferenceMode::kMajority;
  if (name == "minority") return PreferenceMode::kMinority;
  throw ConfigError("unknown preference mode '" + std::string(name) +
                    "' (expected majority or minority)");
}

std::vector<std::size_t> AllocateClassCounts(const DistributionSpec& spec) {
  const std::size_t n = spec.n_label;
  if (n < 2) throw ConfigError("distribution spec needs n_label >= 2");
  if (spec.total_size == 0) throw ConfigError("distribution spec: total_size is 0");
  if (spec.preference_class < 0 ||
      static_cast<std::size_t>(spec.preference_class) >= n) {
    throw ConfigError("distribution spec: preference class out of range");
  }
  const int second = SecondClassOf(spec);
  if (second < 0 || static_cast<std::size_t>(second) >= n ||
      second == spec.preference_class) {
    throw ConfigError("distribution spec: invalid second class");
  }
  if (!(spec.cp > 0.0 && spec.cp <= 1.0)) {
    throw ConfigError("distribution spec: cp must lie in (0, 1]");
  }
  if (!(spec.cd >= 0.0 && spec.cd <= 1.0)) {
    throw ConfigError("distribution spec: cd must lie in [0, 1]");
  }

  const auto total = static_cast<long>(spec.total_size);
  const auto pref = static_cast<std::size_t>(spec.preference_class);
  std::vector<std::size_t> counts(n, 0);
  const long pref_count = std::lround(spec.cp * static_cast<double>(total));
  const bool majority = spec.mode == PreferenceMode::kMajority;
  if (majority && pref_count == total) {
    counts[pref] = spec.total_size;
    return counts;
  }
  const long delta = std::lround(spec.cd * static_cast<double>(total));
  const long second_count = majority ? pref_count - delta : pref_count + delta;
  const long rest = total - pref_count - second_count;
  if (pref_count < 0 || second_count < 0 || rest < 0) {
    throw ConfigError("infeasible distribution spec (cp=" +
                      std::to_string(spec.cp) + ", cd=" +
                      std::to_string(spec.cd) + "): negative class count");
  }
  const std::size_t n_rest = n - 2;
  if (n_rest == 0 && rest != 0) {
    throw ConfigError(
        "infeasible distribution spec: two classes cannot absorb the "
        "remaining " + std::to_string(rest) + " samples");
  }
  counts[pref] = static_cast<std::size_t>(pref_count);
  counts[static_cast<std::size_t>(second)] =
      static_cast<std::size_t>(second_count);
  if (n_rest > 0) {
    const std::size_t base = static_cast<std::size_t>(rest) / n_rest;
    std::size_t extra = static_cast<std::size_t>(rest) % n_rest;
    for (std::size_t c = 0; c < n; ++c) {
      if (c == pref || c == static_cast<std::size_t>(second)) continue;
      counts[c] = base + (extra > 0 ? 1 : 0);
      if (extra > 0) --extra;
    }
  }
  for (std::size_t c = 0; c < n; ++c) {
    const bool loses = majority ? counts[c] > counts[pref]
                                : counts[c] < counts[pref];
    if (loses) {
      throw ConfigError("infeasible distribution spec (cp=" +
                        std::to_string(spec.cp) + ", cd=" +
                        std::to_string(spec.cd) + "): class " +
                        std::to_string(c) + " outranks the preference class");
    }
  }
  return counts;
}

bool CdIsRealizable(const DistributionSpec& spec) {
  const std::vector<std::size_t> counts = AllocateClassCounts(spec);
  const auto pref = static_cast<std::size_t>(spec.preference_class);
  if (counts[pref] == spec.total_size) return true;
  const auto second = static_cast<std::size_t>(SecondClassOf(spec));
  for (std::size_t c = 0; c < counts.size(); ++c) {
    if (c == pref || c == second) continue;
    if (spec.mode == PreferenceMode::kMajority ? counts[c] > counts[second]
                                               : counts[c] < counts[second]) {
      return false;
    }
  }
  return true;
}

LabeledDataset RealizeCounts(const LabeledDataset& pool,
                             std::span<const std::size_t> counts,
                             std::uint64_t seed,
                             std::span<const std::size_t> excluded_origins) {
  if (counts.size() != pool.n_label()) {
    throw InputError("class count vector does not match pool n_label");
  }
  const std::vector<std::size_t> excluded = SortedCopy(excluded_origins);
  const auto by_class = pool.RowsByClass();
  std::vector<std::size_t> chosen;
  for (std::size_t c = 0; c < counts.size(); ++c) {
    if (counts[c] == 0) continue;
    std::vector<std::size_t> candidates;
    for (std::size_t r : by_class[c]) {
      if (!std::binary_search(excluded.begin(), excluded.end(),
                              pool.origin(r))) {
        candidates.push_back(r);
      }
    }
    if (candidates.size() < counts[c]) {
      throw InputError("pool has " + std::to_string(candidates.size()) +
                       " available samples of class " + std::to_string(c) +
                       ", need " + std::to_string(counts[c]));
    }
    Rng rng(DeriveSeed(seed, "realize", c));
    // Partial Fisher-Yates: only the first counts[c] slots are needed.
    for (std::size_t i = 0; i < counts[c]; ++i) {
      const std::size_t j = i + rng.UniformIndex(candidates.size() - i);
      std::swap(candidates[i], candidates[j]);
      chosen.push_back(candidates[i]);
    }
  }
  std::sort(chosen.begin(), chosen.end());
  return pool.Subset(chosen);
}

LabeledDataset RealizeDistribution(
    const LabeledDataset& pool, const DistributionSpec& spec,
    std::uint64_t seed, std::span<const std::size_t> excluded_origins) {
  if (spec.n_label != pool.n_label()) {
    throw InputError("distribution spec n_label differs from the pool's");
  }
  const auto counts = AllocateClassCounts(spec);
  return RealizeCounts(pool, counts, seed, excluded_origins);
}

std::vector<std::size_t> PreferenceMultiplicities(std::size_t n_user,
                                                  std::size_t n_label,
                                                  double ud_target) {
  if (n_label < 2 || n_user == 0) {
    throw ConfigError("preference multiplicities need users and >= 2 classes");
  }
  std::vector<std::size_t> best;
  double best_err = std::numeric_limits<double>::infinity();
  const std::size_t k_min = (n_user + n_label - 1) / n_label;
  for (std::size_t k = k_min; k <= n_user; ++k) {
    const std::size_t r = n_user - k;
    std::vector<std::size_t> m(n_label, 0);
    m[0] = k;
    const std::size_t others = n_label - 1;
    for (std::size_t c = 1; c < n_label; ++c) {
      m[c] = r / others + ((c - 1) < r % others ? 1 : 0);
    }
    if (*std::max_element(m.begin() + 1, m.end()) > k) continue;
    const auto [lo, hi] = std::minmax_element(m.begin(), m.end());
    const double ud =
        static_cast<double>(*hi - *lo) / static_cast<double>(n_user);
    const double err = std::abs(ud - ud_target);
    if (err < best_err) {
      best_err = err;
      best = m;
    }
  }
  return best;
}

std::vector<std::size_t> SizesForImbalance(std::size_t n_user,
                                           std::size_t base,
                                           double id_target) {
  if (id_target < 0.0) throw ConfigError("id_target must be >= 0");
  std::vector<std::size_t> sizes(n_user, base);
  const std::size_t pairs = n_user / 2;
  if (pairs == 0 || id_target == 0.0) return sizes;
  const double spread = std::sqrt(id_target * static_cast<double>(n_user - 1) /
                                  (2.0 * static_cast<double>(pairs)));
  const auto s = static_cast<long>(std::lround(spread));
  if (s >= static_cast<long>(base)) {
    throw ConfigError("id_target too large for the base dataset size");
  }
  for (std::size_t p = 0; p < pairs; ++p) {
    sizes[2 * p] = base + static_cast<std::size_t>(s);
    sizes[2 * p + 1] = base - static_cast<std::size_t>(s);
  }
  return sizes;
}

FederationSpec MakeFederationSpec(const FederationParams& params,
                                  std::uint64_t seed) {
  if (params.n_user == 0) throw ConfigError("federation needs n_user >= 1");
  if (params.cp_min > params.cp_max || params.cd_min > params.cd_max) {
    throw ConfigError("federation cp/cd ranges are inverted");
  }
  Rng rng(DeriveSeed(seed, "federation"));
  const std::size_t n = params.n_user;
  const std::size_t n_label = params.n_label;

  std::vector<int> preferences(n);
  if (params.ud_target) {
    const auto mult = PreferenceMultiplicities(n, n_label, *params.ud_target);
    std::vector<int> classes(n_label);
    for (std::size_t c = 0; c < n_label; ++c) classes[c] = static_cast<int>(c);
    rng.Shuffle(std::span<int>(classes));
    std::size_t u = 0;
    for (std::size_t c = 0; c < n_label; ++c) {
      for (std::size_t k = 0; k < mult[c]; ++k) preferences[u++] = classes[c];
    }
    rng.Shuffle(std::span<int>(preferences));
  } else {
    for (int& p : preferences) p = static_cast<int>(rng.UniformIndex(n_label));
  }

  const std::vector<std::size_t> sizes =
      params.id_target
          ? SizesForImbalance(n, params.samples_per_user, *params.id_target)
          : std::vector<std::size_t>(n, params.samples_per_user);

  FederationSpec spec;
  spec.n_user = n;
  spec.ud_target = params.ud_target;
  spec.id_target = params.id_target;
  for (std::size_t u = 0; u < n; ++u) {
    DistributionSpec d;
    d.n_label = n_label;
    d.total_size = sizes[u];
    d.preference_class = preferences[u];
    d.mode = params.mode;
    int second = static_cast<int>(rng.UniformIndex(n_label - 1));
    if (second >= d.preference_class) ++second;
    d.second_class = second;
    bool ok = false;
    for (int attempt = 0; attempt < 10000 && !ok; ++attempt) {
      d.cp = rng.Uniform(params.cp_min, params.cp_max);
      d.cd = rng.Uniform(params.cd_min, params.cd_max);
      try {
        AllocateClassCounts(d);
        ok = true;
      } catch (const ConfigError&) {
      }
    }
    if (!ok) {
      throw ConfigError("no feasible (cp, cd) pair in the configured ranges");
    }
    spec.users.push_back(d);
  }
  return spec;
}

Federation RealizeFederation(const LabeledDataset& pool,
                             const FederationSpec& spec, std::uint64_t seed,
                             std::span<const std::size_t> excluded_origins) {
  if (spec.users.size() != spec.n_user) {
    throw ConfigError("federation spec lists " +
                      std::to_string(spec.users.size()) + " users, n_user = " +
                      std::to_string(spec.n_user));
  }
  Federation fed;
  std::vector<std::size_t> excluded(excluded_origins.begin(),
                                    excluded_origins.end());
  std::sort(excluded.begin(), excluded.end());
  for (std::size_t u = 0; u < spec.n_user; ++u) {
    LabeledDataset client = RealizeDistribution(
        pool, spec.users[u], DeriveSeed(seed, "client", u), excluded);
    excluded.insert(excluded.end(), client.origins().begin(),
                    client.origins().end());
    std::sort(excluded.begin(), excluded.end());
    fed.used_origins.insert(fed.used_origins.end(), client.origins().begin(),
                            client.origins().end());
    fed.clients.push_back(std::move(client));
  }
  std::sort(fed.used_origins.begin(), fed.used_origins.end());
  return fed;
}

}  // namespace ppa::datagen
