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

#include "ppa/fedsim/simulator.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "ppa/common/error.h"
#include "ppa/fedsim/fedavg.h"
#include "ppa/nn/engine.h"

namespace ppa::fedsim {

std::string_view AggregationKindName(AggregationKind kind) {
  return kind == AggregationKind::kFedAvg ? "fedavg" : "selective";
}

AggregationKind ParseAggregationKind(std::string_view name) {
  if (name == "fedavg") return AggregationKind::kFedAvg;
  if (name == "selective") return AggregationKind::kSelective;
  throw ConfigError("unknown aggregation '" + std::string(name) +
                    "' (expected fedavg or selective)");
}

std::string_view SelectiveWeightingName(SelectiveWeighting w) {
  return w == SelectiveWeighting::kEqual ? "equal" : "data_size";
}

SelectiveWeighting ParseSelectiveWeighting(std::string_view name) {
  if (name == "equal") return SelectiveWeighting::kEqual;
  if (name == "data_size") return SelectiveWeighting::kDataSize;
  throw ConfigError("unknown selective weighting '" + std::string(name) +
                    "' (expected equal or data_size)");
}

void FlConfig::Validate(std::size_t n_user) const {
  if (n_rounds < 1) throw ConfigError("fl.rounds must be >= 1");
  if (!(client_fraction > 0.0 && client_fraction <= 1.0)) {
    throw ConfigError("fl.client_fraction must lie in (0, 1]");
  }
  if (local_epochs < 1) throw ConfigError("fl.local_epochs must be >= 1");
  train.Validate();
  if (aggregation == AggregationKind::kSelective && x >= n_user) {
    throw ConfigError("attack.x must be < n_user (x = " + std::to_string(x) +
                      ", n_user = " + std::to_string(n_user) + ")");
  }
}

RoundState InitialState(const nn::ParamVector& init, std::size_t n_user) {
  RoundState s;
  s.uploaded.assign(n_user, init);
  s.distributed.assign(n_user, init);
  s.sensitivities.resize(n_user);
  s.agg_sensitivities.resize(n_user);
  s.verdict_streaks.assign(n_user, {-1, 0});
  s.predictions.resize(n_user);
  s.locked.resize(n_user);
  return s;
}

void FedAvgHook::Aggregate(RoundState& state,
                           std::span<const std::size_t> data_sizes) {
  std::vector<nn::ParamVector> models;
  std::vector<double> weights;
  for (std::size_t u : state.selected) {
    models.push_back(state.uploaded[u]);
    weights.push_back(static_cast<double>(data_sizes[u]));
  }
  const nn::ParamVector global = FedAvg(models, weights);
  for (std::size_t u : state.selected) state.distributed[u] = global;
}

std::vector<std::size_t> ClientFractionSample(std::size_t n_user, double c,
                                              Rng& rng) {
  if (!(c > 0.0 && c <= 1.0)) {
    throw ConfigError("client fraction must lie in (0, 1]");
  }
  // The small epsilon keeps e.g. 0.1 * 10 from rounding up to 2.
  const auto k = std::min<std::size_t>(
      n_user, static_cast<std::size_t>(
                  std::ceil(c * static_cast<double>(n_user) - 1e-9)));
  std::vector<std::size_t> ids(n_user);
  for (std::size_t i = 0; i < n_user; ++i) ids[i] = i;
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + rng.UniformIndex(n_user - i);
    std::swap(ids[i], ids[j]);
  }
  ids.resize(k);
  std::sort(ids.begin(), ids.end());
  return ids;
}

nlohmann::json RoundLogRecord::ToJson() const {
  nlohmann::json j = {{"round", round},
                      {"user", user},
                      {"local_acc_before", local_acc_before},
                      {"global_acc_after", global_acc_after},
                      {"locked", locked}};
  j["predicted_class"] =
      predicted_class ? nlohmann::json(*predicted_class) : nlohmann::json();
  return j;
}

RoundState RunRound(const RoundState& prev,
                    std::span<const datagen::LabeledDataset> clients,
                    const nn::Architecture& arch, const FlConfig& cfg,
                    AggregationHook& hook,
                    const datagen::LabeledDataset* eval_set,
                    std::vector<RoundLogRecord>* log) {
  const std::size_t n = prev.n_user();
  if (clients.size() != n) {
    throw InputError("federation has " + std::to_string(clients.size()) +
                     " clients, state has " + std::to_string(n));
  }
  RoundState next = prev;
  next.round_index = prev.round_index + 1;
  const int t = next.round_index;

  Rng sampler(DeriveSeed(cfg.train.seed, "sample", static_cast<std::uint64_t>(t)));
  next.selected = ClientFractionSample(n, cfg.client_fraction, sampler);

  std::vector<std::size_t> sizes(n);
  for (std::size_t u = 0; u < n; ++u) sizes[u] = clients[u].size();

  for (std::size_t u = 0; u < n; ++u) next.uploaded[u] = prev.distributed[u];
  for (std::size_t u : next.selected) {
    nn::TrainConfig local = cfg.train;
    local.epochs = cfg.local_epochs;
    local.seed = DeriveSeed(cfg.train.seed, "local",
                            static_cast<std::uint64_t>(t), u);
    next.uploaded[u] = nn::Train(prev.distributed[u], arch, clients[u], local);
  }

  hook.Aggregate(next, sizes);

  if (log != nullptr && eval_set != nullptr) {
    const auto refs = eval_set->Refs();
    for (std::size_t u = 0; u < n; ++u) {
      RoundLogRecord r;
      r.round = t;
      r.user = u;
      r.local_acc_before = nn::Accuracy(next.uploaded[u], arch, refs);
      r.global_acc_after = nn::Accuracy(next.distributed[u], arch, refs);
      r.locked = next.locked.size() > u && next.locked[u].has_value();
      if (next.predictions.size() > u) r.predicted_class = next.predictions[u];
      log->push_back(r);
    }
  }
  return next;
}

RoundState Simulate(const nn::ParamVector& init,
                    std::span<const datagen::LabeledDataset> clients,
                    const nn::Architecture& arch, const FlConfig& cfg,
                    AggregationHook& hook,
                    const datagen::LabeledDataset* eval_set,
                    std::vector<RoundLogRecord>* log,
                    const std::function<bool(const RoundState&)>& stop) {
  cfg.Validate(clients.size());
  RoundState state = InitialState(init, clients.size());
  for (int t = 1; t <= cfg.n_rounds; ++t) {
    state = RunRound(state, clients, arch, cfg, hook, eval_set, log);
    if (stop && stop(state)) break;
  }
  return state;
}

}  // namespace ppa::fedsim
