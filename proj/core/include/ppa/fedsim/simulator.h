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

#ifndef PPA_FEDSIM_SIMULATOR_H_
#define PPA_FEDSIM_SIMULATOR_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "ppa/common/rng.h"
#include "ppa/datagen/dataset.h"
#include "ppa/nn/architecture.h"
#include "ppa/nn/param_vector.h"
#include "ppa/nn/train.h"

namespace ppa::fedsim {

enum class AggregationKind { kFedAvg, kSelective };
// How the x + 1 models of a selective aggregation are weighted.
enum class SelectiveWeighting { kEqual, kDataSize };

std::string_view AggregationKindName(AggregationKind kind);
AggregationKind ParseAggregationKind(std::string_view name);
std::string_view SelectiveWeightingName(SelectiveWeighting w);
SelectiveWeighting ParseSelectiveWeighting(std::string_view name);

struct FlConfig {
  int n_rounds = 15;
  double client_fraction = 1.0;
  int local_epochs = 1;
  // Local training; epochs is replaced by local_epochs and the seed is
  // the root of every per-round, per-user sub-seed.
  nn::TrainConfig train;
  AggregationKind aggregation = AggregationKind::kSelective;
  std::size_t x = 4;
  SelectiveWeighting weighting = SelectiveWeighting::kEqual;

  // Throws ConfigError naming the offending field.
  void Validate(std::size_t n_user) const;
};

// Everything the server holds after one round. Vectors indexed by user id.
struct RoundState {
  int round_index = 0;
  std::vector<nn::ParamVector> uploaded;
  std::vector<nn::ParamVector> distributed;
  std::vector<std::size_t> selected;  // ascending user ids
  // Filled by the attacker; empty entries for users it did not observe.
  std::vector<std::vector<double>> sensitivities;
  std::vector<std::vector<double>> agg_sensitivities;
  std::vector<std::pair<int, int>> verdict_streaks;  // (class, run length)
  std::vector<std::optional<int>> predictions;
  std::vector<std::optional<int>> locked;

  std::size_t n_user() const { return distributed.size(); }
};

// Round 0: the shared init distributed to every user.
RoundState InitialState(const nn::ParamVector& init, std::size_t n_user);

// Server-side aggregation. Implementations receive the state after upload
// (uploaded filled, distributed still holding the previous round's models)
// and must overwrite distributed[u] for every selected user.
class AggregationHook {
 public:
  virtual ~AggregationHook() = default;
  virtual void Aggregate(RoundState& state,
                         std::span<const std::size_t> data_sizes) = 0;
};

// Plain FedAvg over the selected uploads, sent to every selected user.
class FedAvgHook : public AggregationHook {
 public:
  void Aggregate(RoundState& state,
                 std::span<const std::size_t> data_sizes) override;
};

// ceil(c * n_user) distinct ids drawn uniformly without replacement,
// returned ascending.
std::vector<std::size_t> ClientFractionSample(std::size_t n_user, double c,
                                              Rng& rng);

struct RoundLogRecord {
  int round = 0;
  std::size_t user = 0;
  double local_acc_before = 0.0;
  double global_acc_after = 0.0;
  bool locked = false;
  std::optional<int> predicted_class;

  nlohmann::json ToJson() const;
};

// One FL round: sample clients, train each selected client from its
// distributed model, upload, let `hook` aggregate. With a non-null `log`,
// appends one record per user measured on `eval_set`.
RoundState RunRound(const RoundState& prev,
                    std::span<const datagen::LabeledDataset> clients,
                    const nn::Architecture& arch, const FlConfig& cfg,
                    AggregationHook& hook,
                    const datagen::LabeledDataset* eval_set = nullptr,
                    std::vector<RoundLogRecord>* log = nullptr);

// Runs up to cfg.n_rounds rounds from `init`. `stop` is consulted after
// every round; returning true ends the run early.
RoundState Simulate(const nn::ParamVector& init,
                    std::span<const datagen::LabeledDataset> clients,
                    const nn::Architecture& arch, const FlConfig& cfg,
                    AggregationHook& hook,
                    const datagen::LabeledDataset* eval_set = nullptr,
                    std::vector<RoundLogRecord>* log = nullptr,
                    const std::function<bool(const RoundState&)>& stop = {});

}  // namespace ppa::fedsim

#endif  // PPA_FEDSIM_SIMULATOR_H_
