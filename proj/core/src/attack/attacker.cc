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

#include "ppa/attack/attacker.h"

#include <map>
#include <optional>

#include "ppa/attack/selective.h"
#include "ppa/fedsim/fedavg.h"

namespace ppa::attack {

nlohmann::json TraceEntry::ToJson() const {
  return {{"round", round},
          {"user", user},
          {"upload_sensitivity", upload_sensitivity},
          {"ds", ds},
          {"candidate_class", candidate_class},
          {"prediction", prediction}};
}

PpaAttacker::PpaAttacker(const nn::Architecture& arch,
                         const datagen::AuxiliaryStore& aux,
                         const MetaClassifier& meta, const AttackerConfig& cfg,
                         std::size_t n_user)
    : arch_(arch),
      aux_(aux),
      meta_(meta),
      cfg_(cfg),
      profiler_(n_user, cfg.th_round),
      rankings_(n_user) {}

void PpaAttacker::Aggregate(fedsim::RoundState& state,
                            std::span<const std::size_t> data_sizes) {
  const int t = state.round_index;
  for (std::size_t u : state.selected) {
    // The init model's sensitivity stands in for round 0.
    if (state.agg_sensitivities[u].empty()) {
      state.agg_sensitivities[u] =
          ExtractSensitivity(state.distributed[u], arch_, aux_, cfg_.alpha);
    }
    SensitivityVector s =
        ExtractSensitivity(state.uploaded[u], arch_, aux_, cfg_.alpha);
    TraceEntry e;
    e.round = t;
    e.user = u;
    e.ds = DifferentialSensitivity(state.agg_sensitivities[u], s);
    e.candidate_class = CandidateClass(s, cfg_.mode);
    if (!profiler_.locked(u)) {
      const auto& features =
          cfg_.features == MetaFeatures::kDifferential ? e.ds : s;
      rankings_[u] = meta_.Ranking(features);
      const Verdict v = profiler_.Observe(u, rankings_[u].front(), t);
      e.prediction = v.prediction;
      state.predictions[u] = v.prediction;
      state.verdict_streaks[u] = {v.prediction, profiler_.streak(u)};
      if (v.locked) state.locked[u] = v.prediction;
    }
    e.upload_sensitivity = s;
    state.sensitivities[u] = std::move(s);
    trace_.push_back(std::move(e));
  }

  if (cfg_.aggregation == fedsim::AggregationKind::kFedAvg) {
    fedsim::FedAvgHook plain;
    plain.Aggregate(state, data_sizes);
    std::optional<SensitivityVector> shared;
    for (std::size_t u : state.selected) {
      if (!shared) {
        shared = ExtractSensitivity(state.distributed[u], arch_, aux_,
                                    cfg_.alpha);
      }
      state.agg_sensitivities[u] = *shared;
    }
    return;
  }

  std::optional<nn::ParamVector> global;
  std::optional<SensitivityVector> global_s;
  std::vector<nn::ParamVector> distributed(state.n_user());
  for (std::size_t u : state.selected) {
    if (cfg_.release_locked && profiler_.locked(u)) {
      if (!global) {
        std::vector<nn::ParamVector> all;
        std::vector<double> sizes;
        for (std::size_t v : state.selected) {
          all.push_back(state.uploaded[v]);
          sizes.push_back(static_cast<double>(data_sizes[v]));
        }
        global = fedsim::FedAvg(all, sizes);
      }
      distributed[u] = *global;
      continue;
    }
    const auto partners = SelectPartners(u, state.sensitivities,
                                         state.selected, cfg_.x, cfg_.mode);
    std::vector<nn::ParamVector> models{state.uploaded[u]};
    std::vector<double> weights{1.0};
    if (cfg_.weighting == fedsim::SelectiveWeighting::kDataSize) {
      weights[0] = static_cast<double>(data_sizes[u]);
    }
    for (std::size_t p : partners) {
      models.push_back(state.uploaded[p]);
      weights.push_back(cfg_.weighting == fedsim::SelectiveWeighting::kDataSize
                            ? static_cast<double>(data_sizes[p])
                            : 1.0);
    }
    distributed[u] = fedsim::FedAvg(models, weights);
  }
  for (std::size_t u : state.selected) {
    const bool shared = cfg_.release_locked && profiler_.locked(u);
    state.distributed[u] = std::move(distributed[u]);
    if (shared && global_s) {
      state.agg_sensitivities[u] = *global_s;
      continue;
    }
    state.agg_sensitivities[u] =
        ExtractSensitivity(state.distributed[u], arch_, aux_, cfg_.alpha);
    if (shared) global_s = state.agg_sensitivities[u];
  }
}

std::vector<std::pair<int, double>> CandidateDsByRound(std::span<const TraceEntry> trace,
                                       std::size_t n_user) {
  std::vector<std::optional<int>> prev_candidate(n_user);
  std::map<int, std::pair<double, std::size_t>> per_round;
  int current = -1;
  std::vector<std::optional<int>> pending(n_user);
  for (const TraceEntry& e : trace) {
    if (e.round != current) {
      for (std::size_t u = 0; u < n_user; ++u) {
        if (pending[u]) prev_candidate[u] = pending[u];
        pending[u].reset();
      }
      current = e.round;
    }
    if (prev_candidate[e.user]) {
      auto& [sum, n] = per_round[e.round];
      sum += e.ds[static_cast<std::size_t>(*prev_candidate[e.user])];
      ++n;
    }
    pending[e.user] = e.candidate_class;
  }
  std::vector<std::pair<int, double>> out;
  for (const auto& [round, acc] : per_round) {
    out.emplace_back(round, acc.first / static_cast<double>(acc.second));
  }
  return out;
}

}  // namespace ppa::attack
