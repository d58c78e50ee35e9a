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

#ifndef PPA_DATAGEN_METRICS_H_
#define PPA_DATAGEN_METRICS_H_

#include <cstddef>
#include <span>
#include <vector>

#include "ppa/datagen/dataset.h"
#include "ppa/datagen/partition.h"

namespace ppa::datagen {

// Heterogeneity metrics of a federation.
struct FederationMetrics {
  std::vector<double> cp;  // preference-class count / size, per user
  std::vector<double> cd;  // |preference - closest class| / size, per user
  double ud = 0.0;         // user dispersion
  double id = 0.0;         // imbalance degree
};

// Preference class of a count vector: the largest count (majority) or the
// smallest (minority), ties going to the lowest index.
int PreferenceOf(std::span<const std::size_t> counts, PreferenceMode mode);

// CP and CD of one count vector. CD is 0 when only one class is present.
double ClassProportion(std::span<const std::size_t> counts,
                       PreferenceMode mode = PreferenceMode::kMajority);
double ClassDominance(std::span<const std::size_t> counts,
                      PreferenceMode mode = PreferenceMode::kMajority);

// (max - min) over all n_label classes of the number of users preferring
// that class, divided by the number of users.
double UserDispersion(std::span<const int> preferences, std::size_t n_label);

// Sample variance (n - 1 denominator) of the dataset sizes; 0 for < 2 users.
double ImbalanceDegree(std::span<const std::size_t> sizes);

// Empty federations yield default metrics.
FederationMetrics ComputeMetrics(std::span<const LabeledDataset> federation,
                                 PreferenceMode mode = PreferenceMode::kMajority);

}  // namespace ppa::datagen

#endif  // PPA_DATAGEN_METRICS_H_
