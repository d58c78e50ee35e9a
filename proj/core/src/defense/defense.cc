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

#include "ppa/defense/defense.h"

#include <fstream>
#include <set>

#include "ppa/common/error.h"

namespace ppa::defense {

void DpConfig::Validate() const {
  if (!(clip_norm > 0.0)) throw ConfigError("dp.clip_norm must be > 0");
  if (!(noise_multiplier >= 0.0)) {
    throw ConfigError("dp.noise_multiplier must be >= 0");
  }
}

nn::TrainConfig DefenseVariant::Apply(const nn::TrainConfig& base) const {
  nn::TrainConfig out = base;
  out.dropout_enabled = dropout;
  out.dp = dp;
  return out;
}

void DefenseSweep::Validate() const {
  if (variants.empty()) throw ConfigError("defense.variants is empty");
  std::set<std::string> seen;
  for (const DefenseVariant& v : variants) {
    if (v.label.empty()) throw ConfigError("defense variant without a label");
    if (!seen.insert(v.label).second) {
      throw ConfigError("duplicate defense label '" + v.label + "'");
    }
    if (v.dp) v.dp->Validate();
  }
}

DefenseSweep StandardSweep() {
  DefenseSweep s;
  s.variants.push_back({"none", false, std::nullopt});
  s.variants.push_back({"dropout", true, std::nullopt});
  for (double m : {0.05, 0.25, 1.0, 4.0}) {
    DpConfig dp;
    dp.noise_multiplier = m;
    std::string label = "dp-" + std::to_string(m);
    label.erase(label.find_last_not_of('0') + 1);
    if (label.back() == '.') label.pop_back();
    s.variants.push_back({label, false, dp});
  }
  return s;
}

void WriteSweepCsv(const std::filesystem::path& path,
                   std::span<const SweepRow> rows) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << "label,noise_multiplier,attack_acc_top1,model_utility\n";
  out.precision(10);
  for (const SweepRow& r : rows) {
    out << r.label << ',' << r.noise_multiplier << ',' << r.attack_acc_top1
        << ',' << r.model_utility << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace ppa::defense
