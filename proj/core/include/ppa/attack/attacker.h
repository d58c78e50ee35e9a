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

#ifndef PPA_ATTACK_ATTACKER_H_
#define PPA_ATTACK_ATTACKER_H_

#include <cstddef>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "ppa/attack/meta.h"
#include "ppa/attack/profiler.h"
#include "ppa/attack/sensitivity.h"
#include "ppa/datagen/auxiliary.h"
#include "ppa/datagen/partition.h"
#include "ppa/fedsim/simulator.h"
#include "ppa/nn/architecture.h"

namespace ppa::attack {

// What the meta-classifier is fed each round: the differential sensitivity
// against the model the user last received, or the raw sensitivity of the
// upload.
enum class MetaFeatures { kDifferential, kSensitivity };

struct AttackerConfig {
  double alpha = 0.001;
  int th_round = 3;
  // Once locked, a user gets the plain FedAvg model instead of a selective
  // aggregate.
  bool release_locked = true;
  std::size_t x = 4;
  datagen::PreferenceMode mode = datagen::PreferenceMode::kMajority;
  fedsim::AggregationKind aggregation = fedsim::AggregationKind::kSelective;
  fedsim::SelectiveWeighting weighting = fedsim::SelectiveWeighting::kEqual;
  MetaFeatures features = MetaFeatures::kDifferential;
};

// One observation of one user in one round.
struct TraceEntry {
  int round = 0;
  std::size_t user = 0;
  SensitivityVector upload_sensitivity;
  SensitivityVector ds;
  int candidate_class = 0;  // chosen from upload_sensitivity
  int prediction = -1;      // -1 once the user is locked

  nlohmann::json ToJson() const;
};

// The malicious server: extracts sensitivities of every upload, profiles
// users with the meta-classifier and aggregates either selectively or with
// plain FedAvg. The architecture, auxiliary store and meta-classifier must
// outlive the attacker.
class PpaAttacker : public fedsim::AggregationHook {
 public:
  PpaAttacker(const nn::Architecture& arch,
              const datagen::AuxiliaryStore& aux, const MetaClassifier& meta,
              const AttackerConfig& cfg, std::size_t n_user);

  void Aggregate(fedsim::RoundState& state,
                 std::span<const std::size_t> data_sizes) override;

  const ProfilerState& profiler() const { return profiler_; }
  const std::vector<TraceEntry>& trace() const { return trace_; }
  // Meta-classifier ranking behind each user's latest verdict; empty for
  // users never profiled.
  const std::vector<std::vector<int>>& rankings() const { return rankings_; }

 private:
  const nn::Architecture& arch_;
  const datagen::AuxiliaryStore& aux_;
  const MetaClassifier& meta_;
  AttackerConfig cfg_;
  ProfilerState profiler_;
  std::vector<TraceEntry> trace_;
  std::vector<std::vector<int>> rankings_;
};

// (round, mean over users of DS at the candidate class each user got in
// its previous observed round). Rounds where no user has a previous
// candidate are skipped.
std::vector<std::pair<int, double>> CandidateDsByRound(std::span<const TraceEntry> trace,
                                       std::size_t n_user);

}  // namespace ppa::attack

#endif  // PPA_ATTACK_ATTACKER_H_
