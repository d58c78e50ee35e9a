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

#ifndef PPA_DEFENSE_DEFENSE_H_
#define PPA_DEFENSE_DEFENSE_H_

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ppa/defense/dp_config.h"
#include "ppa/nn/train.h"

namespace ppa::defense {

// One client-side mitigation setting.
struct DefenseVariant {
  std::string label;
  bool dropout = false;
  std::optional<DpConfig> dp;

  // Copy of `base` with this variant's dropout and DP settings.
  nn::TrainConfig Apply(const nn::TrainConfig& base) const;
  friend bool operator==(const DefenseVariant&,
                         const DefenseVariant&) = default;
};

struct DefenseSweep {
  std::vector<DefenseVariant> variants;

  // Throws ConfigError on an empty list, a duplicate or empty label, or an
  // invalid DP setting.
  void Validate() const;
  friend bool operator==(const DefenseSweep&, const DefenseSweep&) = default;
};

// The sweep used when a config asks for one without listing variants:
// none, dropout, and DP at noise multipliers 0.05, 0.25, 1 and 4.
DefenseSweep StandardSweep();

struct SweepRow {
  std::string label;
  double noise_multiplier = 0.0;  // 0 for non-DP variants
  double attack_acc_top1 = 0.0;
  double model_utility = 0.0;
};

// Columns: label,noise_multiplier,attack_acc_top1,model_utility.
void WriteSweepCsv(const std::filesystem::path& path,
                   std::span<const SweepRow> rows);

}  // namespace ppa::defense

#endif  // PPA_DEFENSE_DEFENSE_H_
