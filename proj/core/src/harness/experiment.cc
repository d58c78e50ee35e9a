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

#include "ppa/harness/experiment.h"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include "ppa/attack/topk.h"
#include "ppa/common/error.h"
#include "ppa/datagen/idx.h"
#include "ppa/datagen/synthetic.h"
#include "ppa/nn/checkpoint.h"
#include "ppa/nn/engine.h"

namespace ppa::harness {
namespace {

using nlohmann::json;

// Runs f, prefixing any library error with the stage name while keeping
// its category.
template <typename F>
auto Stage(const char* name, F&& f) -> decltype(f()) {
  const std::string prefix = std::string(name) + ": ";
  try {
    return f();
  } catch (const InputError& e) {
    throw InputError(prefix + e.what());
  } catch (const FormatError& e) {
    throw FormatError(prefix + e.what());
  } catch (const ConfigError& e) {
    throw ConfigError(prefix + e.what());
  } catch (const StateError& e) {
    throw StateError(prefix + e.what());
  } catch (const InternalError& e) {
    throw InternalError(prefix + e.what());
  } catch (const IoError& e) {
    throw IoError(prefix + e.what());
  }
}

double MeanAccuracy(std::span<const nn::ParamVector> models,
                    const nn::Architecture& arch,
                    const datagen::LabeledDataset& test) {
  const auto refs = test.Refs();
  double sum = 0.0;
  for (const nn::ParamVector& m : models) sum += nn::Accuracy(m, arch, refs);
  return sum / static_cast<double>(models.size());
}

fedsim::FlConfig ResolvedFl(const ExperimentConfig& cfg) {
  fedsim::FlConfig fl = cfg.fl;
  fl.x = cfg.attack.x;
  fl.train.seed = DeriveSeed(cfg.seed, "fl");
  return fl;
}

json PairsJson(const std::vector<std::pair<int, double>>& v) {
  json out = json::array();
  for (const auto& [r, d] : v) out.push_back({r, d});
  return out;
}

}  // namespace

PreparedExperiment PrepareData(const ExperimentConfig& cfg) {
  return Stage("data", [&] {
    const nn::Architecture arch = cfg.BuildArchitecture();
    datagen::FederationSpec spec = datagen::MakeFederationSpec(
        [&] {
          datagen::FederationParams p = cfg.federation;
          p.n_label = cfg.dataset.n_label;
          p.mode = cfg.attack.mode;
          return p;
        }(),
        DeriveSeed(cfg.seed, "federation-spec"));

    datagen::Federation federation;
    datagen::AuxiliaryStore aux;
    datagen::LabeledDataset test;
    if (cfg.dataset.kind == DatasetKind::kSynthetic) {
      std::vector<std::size_t> needed(cfg.dataset.n_label, 0);
      for (const datagen::DistributionSpec& d : spec.users) {
        const auto counts = datagen::AllocateClassCounts(d);
        for (std::size_t c = 0; c < counts.size(); ++c) needed[c] += counts[c];
      }
      const std::size_t per_class =
          *std::max_element(needed.begin(), needed.end());
      datagen::SyntheticOptions opt;
      opt.sigma = cfg.dataset.sigma;
      opt.min_mean_distance = cfg.dataset.separation;
      const auto means = datagen::SyntheticClassMeans(
          cfg.dataset.n_label, cfg.dataset.dim, DeriveSeed(cfg.seed, "means"),
          opt);
      // Separate pools with disjoint origin ranges keep the clients fixed
      // when only the auxiliary or test sizes change.
      const datagen::LabeledDataset client_pool = datagen::SampleBlobs(
          means, per_class, opt.sigma, DeriveSeed(cfg.seed, "client-pool"), 0);
      federation = datagen::RealizeFederation(
          client_pool, spec, DeriveSeed(cfg.seed, "federation"));
      const datagen::LabeledDataset aux_pool = datagen::SampleBlobs(
          means, cfg.attack.aux_per_class, opt.sigma,
          DeriveSeed(cfg.seed, "aux-pool"), client_pool.size());
      aux = datagen::BuildAuxiliary(aux_pool, cfg.attack.aux_per_class, {},
                                    DeriveSeed(cfg.seed, "aux"));
      test = datagen::SampleBlobs(
          means, cfg.test_per_class, opt.sigma, DeriveSeed(cfg.seed, "test-pool"),
          client_pool.size() + aux_pool.size());
    } else {
      const datagen::LabeledDataset pool = datagen::LoadIdx(
          cfg.dataset.images, cfg.dataset.labels, cfg.dataset.n_label);
      if (pool.feature_shape() != arch.input_shape()) {
        throw ConfigError("idx samples have shape " +
                          nn::ShapeToString(pool.feature_shape()) +
                          ", model expects " +
                          nn::ShapeToString(arch.input_shape()));
      }
      federation = datagen::RealizeFederation(
          pool, spec, DeriveSeed(cfg.seed, "federation"));
      aux = datagen::BuildAuxiliary(pool, cfg.attack.aux_per_class,
                                    federation.used_origins,
                                    DeriveSeed(cfg.seed, "aux"));
      std::vector<std::size_t> used = federation.used_origins;
      const auto aux_origins = aux.Origins();
      used.insert(used.end(), aux_origins.begin(), aux_origins.end());
      test = datagen::BuildAuxiliary(pool, cfg.test_per_class, used,
                                     DeriveSeed(cfg.seed, "test"))
                 .Merged();
    }
    nn::ParamVector init = nn::InitParams(arch, DeriveSeed(cfg.seed, "init"));
    return PreparedExperiment{arch,
                              std::move(init),
                              std::move(spec),
                              std::move(federation),
                              std::move(aux),
                              std::move(test),
                              {},
                              {},
                              std::nullopt};
  });
}

void TrainShadowStage(const ExperimentConfig& cfg, PreparedExperiment& p) {
  Stage("shadows", [&] {
    attack::ShadowConfig sc;
    sc.n_shadows = cfg.n_shadows();
    sc.mode = cfg.attack.mode;
    std::tie(sc.cp_min, sc.cp_max) = cfg.attack.shadow_cp.value_or(
        std::pair{cfg.federation.cp_min, cfg.federation.cp_max});
    std::tie(sc.cd_min, sc.cd_max) = cfg.attack.shadow_cd.value_or(
        std::pair{cfg.federation.cd_min, cfg.federation.cd_max});
    sc.dataset_size = cfg.attack.shadow_size;
    sc.train.learning_rate = cfg.attack.shadow_learning_rate;
    sc.train.epochs = cfg.attack.shadow_epochs;
    sc.train.batch_size = cfg.fl.train.batch_size;
    sc.alpha = cfg.attack.alpha;
    p.shadows = attack::TrainShadows(p.init, p.arch, p.aux, sc,
                                     DeriveSeed(cfg.seed, "shadows"));
  });
}

void TrainMetaStage(const ExperimentConfig& cfg, PreparedExperiment& p) {
  Stage("meta", [&] {
    if (p.shadows.empty()) throw StateError("shadow models not trained");
    if (cfg.attack.algorithm == MetaAlgorithm::kFederated) {
      nn::TrainConfig retrain = cfg.fl.train;
      retrain.dropout_enabled = false;
      retrain.dp.reset();
      retrain.seed = DeriveSeed(cfg.seed, "meta-data");
      p.meta_samples = attack::BuildMetaDatasetFederated(
          p.shadows, p.arch, p.aux, cfg.attack.alpha, retrain,
          cfg.attack.mode);
    } else {
      p.meta_samples = attack::BuildMetaDatasetCentralized(p.shadows);
    }
    attack::MetaTrainConfig mc = cfg.attack.meta;
    mc.seed = DeriveSeed(cfg.seed, "meta");
    p.meta = attack::TrainMeta(p.meta_samples, cfg.dataset.n_label, mc);
  });
}

PreparedExperiment Prepare(const ExperimentConfig& cfg) {
  PreparedExperiment p = PrepareData(cfg);
  TrainShadowStage(cfg, p);
  TrainMetaStage(cfg, p);
  return p;
}

std::string RunId(const ExperimentConfig& cfg) {
  json j = cfg.ToJson();
  j.erase("output_dir");
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(DeriveSeed(cfg.seed, j.dump())));
  return std::string(buf, 12);
}

json RunReport::ToJson() const {
  json users_j = json::array();
  for (const UserResult& u : users) {
    users_j.push_back({{"user", u.user},
                       {"true_class", u.true_class},
                       {"class_counts", u.class_counts},
                       {"predicted", u.predicted},
                       {"ranking", u.ranking},
                       {"lock_round", u.lock_round ? json(*u.lock_round) : json()},
                       {"top1", u.top1},
                       {"top2", u.top2},
                       {"top3", u.top3}});
  }
  json trace_j = json::array();
  for (const attack::TraceEntry& e : trace) trace_j.push_back(e.ToJson());
  return {{"run_id", run_id},
          {"rounds_run", rounds_run},
          {"accuracy", {{"top1", top1}, {"top2", top2}, {"top3", top3}}},
          {"utility_with_attack", utility_with},
          {"utility_without_attack", utility_without},
          {"fedavg_attack_top1", baseline_top1},
          {"meta_train_accuracy", meta_train_accuracy},
          {"federation_metrics",
           {{"cp", federation_metrics.cp},
            {"cd", federation_metrics.cd},
            {"ud", federation_metrics.ud},
            {"id", federation_metrics.id}}},
          {"users", users_j},
          {"ds_attack", PairsJson(ds_attack)},
          {"ds_fedavg", PairsJson(ds_fedavg)},
          {"trace", trace_j},
          {"config", config}};
}

RunReport RunAttackPhase(const ExperimentConfig& cfg,
                         const PreparedExperiment& p,
                         std::vector<fedsim::RoundLogRecord>* log) {
  return Stage("attack", [&] {
    if (!p.meta) throw StateError("meta-classifier not trained");
    const auto& clients = p.federation.clients;
    const std::size_t n = clients.size();
    const fedsim::FlConfig fl = ResolvedFl(cfg);

    attack::PpaAttacker attacker(p.arch, p.aux, *p.meta, cfg.Attacker(), n);
    std::function<bool(const fedsim::RoundState&)> stop;
    if (cfg.early_stop) {
      stop = [&](const fedsim::RoundState&) {
        return attacker.profiler().AllLocked();
      };
    }
    const fedsim::RoundState final_state =
        fedsim::Simulate(p.init, clients, p.arch, fl, attacker, &p.test, log, stop);

    RunReport r;
    r.run_id = RunId(cfg);
    r.config = cfg.ToJson();
    r.rounds_run = final_state.round_index;
    r.meta_train_accuracy = p.meta->train_accuracy();
    r.federation_metrics = datagen::ComputeMetrics(clients, cfg.attack.mode);
    r.utility_with = MeanAccuracy(final_state.distributed, p.arch, p.test);
    r.trace = attacker.trace();
    r.ds_attack = attack::CandidateDsByRound(r.trace, n);

    std::size_t hits[4] = {0, 0, 0, 0};
    for (std::size_t u = 0; u < n; ++u) {
      UserResult ur;
      ur.user = u;
      ur.class_counts = clients[u].ClassCounts();
      ur.true_class = datagen::PreferenceOf(ur.class_counts, cfg.attack.mode);
      ur.ranking = attacker.rankings()[u];
      ur.lock_round = attacker.profiler().lock_round(u);
      if (!ur.ranking.empty()) {
        ur.predicted = ur.ranking.front();
        const std::size_t kmax = std::min<std::size_t>(3, ur.ranking.size());
        bool* flags[] = {&ur.top1, &ur.top2, &ur.top3};
        for (std::size_t k = 1; k <= kmax; ++k) {
          *flags[k - 1] = attack::TopKMatchCounts(ur.ranking, ur.class_counts,
                                                  k, cfg.attack.mode);
          if (*flags[k - 1]) ++hits[k];
        }
      }
      r.users.push_back(std::move(ur));
    }
    r.top1 = static_cast<double>(hits[1]) / static_cast<double>(n);
    r.top2 = static_cast<double>(hits[2]) / static_cast<double>(n);
    r.top3 = static_cast<double>(hits[3]) / static_cast<double>(n);

    if (fl.aggregation == fedsim::AggregationKind::kFedAvg) {
      r.utility_without = r.utility_with;
      r.baseline_top1 = r.top1;
      r.ds_fedavg = r.ds_attack;
      return r;
    }
    fedsim::FlConfig plain = fl;
    plain.aggregation = fedsim::AggregationKind::kFedAvg;
    plain.n_rounds = r.rounds_run;
    attack::AttackerConfig acfg = cfg.Attacker();
    acfg.aggregation = fedsim::AggregationKind::kFedAvg;
    attack::PpaAttacker observer(p.arch, p.aux, *p.meta, acfg, n);
    const fedsim::RoundState base_state =
        fedsim::Simulate(p.init, clients, p.arch, plain, observer);
    r.utility_without = MeanAccuracy(base_state.distributed, p.arch, p.test);
    r.ds_fedavg = attack::CandidateDsByRound(observer.trace(), n);
    std::size_t base_hits = 0;
    for (std::size_t u = 0; u < n; ++u) {
      const auto& ranking = observer.rankings()[u];
      if (!ranking.empty() &&
          attack::TopKMatchCounts(ranking, r.users[u].class_counts, 1,
                                  cfg.attack.mode)) {
        ++base_hits;
      }
    }
    r.baseline_top1 = static_cast<double>(base_hits) / static_cast<double>(n);
    return r;
  });
}

void PersistRun(const ExperimentConfig& cfg, const PreparedExperiment& p,
                const RunReport& report,
                const std::vector<fedsim::RoundLogRecord>& log) {
  Stage("persist", [&] {
    WriteResolvedConfig(cfg);
    const auto& dir = cfg.output_dir;
    {
      std::ofstream out(dir / "report.json");
      out << report.ToJson().dump(2) << '\n';
      if (!out) throw IoError("cannot write report.json");
    }
    {
      std::ofstream out(dir / "rounds.jsonl");
      for (const auto& rec : log) out << rec.ToJson().dump() << '\n';
      if (!out) throw IoError("cannot write rounds.jsonl");
    }
    if (!p.meta_samples.empty()) attack::WriteMetaCsv(dir / "meta.csv", p.meta_samples);
    if (p.meta) p.meta->Save(dir / "meta.ppam");
    nn::SaveCheckpoint(dir / "init.ppam", p.arch, p.init);
  });
}

RunReport RunExperiment(const ExperimentConfig& cfg) {
  const PreparedExperiment p = Prepare(cfg);
  std::vector<fedsim::RoundLogRecord> log;
  RunReport r = RunAttackPhase(cfg, p, &log);
  if (!cfg.output_dir.empty()) PersistRun(cfg, p, r, log);
  return r;
}

std::vector<defense::SweepRow> RunDefenseSweep(
    const ExperimentConfig& base, const defense::DefenseSweep& sweep,
    const PreparedExperiment* prepared) {
  sweep.Validate();
  std::optional<PreparedExperiment> own;
  if (prepared == nullptr) {
    own = Prepare(base);
    prepared = &*own;
  }
  std::vector<defense::SweepRow> rows;
  for (const defense::DefenseVariant& v : sweep.variants) {
    ExperimentConfig cfg = base;
    cfg.fl.train = v.Apply(base.fl.train);
    const RunReport r = RunAttackPhase(cfg, *prepared);
    defense::SweepRow row;
    row.label = v.label;
    row.noise_multiplier = v.dp ? v.dp->noise_multiplier : 0.0;
    row.attack_acc_top1 = r.top1;
    row.model_utility = r.utility_without;
    rows.push_back(row);
  }
  if (!base.output_dir.empty()) {
    std::filesystem::create_directories(base.output_dir);
    defense::WriteSweepCsv(base.output_dir / "defense_sweep.csv", rows);
  }
  return rows;
}

}  // namespace ppa::harness
