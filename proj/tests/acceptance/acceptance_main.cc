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


// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails. Pass criterion numbers as arguments to
// run a subset, e.g. `acceptance 4 5`.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ppa/attack/sensitivity.h"
#include "ppa/common/error.h"
#include "ppa/common/rng.h"
#include "ppa/datagen/auxiliary.h"
#include "ppa/datagen/partition.h"
#include "ppa/datagen/synthetic.h"
#include "ppa/defense/defense.h"
#include "ppa/fedsim/fedavg.h"
#include "ppa/harness/config.h"
#include "ppa/harness/experiment.h"
#include "ppa/nn/engine.h"
#include "ppa/nn/train.h"
#include "test_util.h"

namespace ppa::acceptance {
namespace {

using nlohmann::json;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string Fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

std::string List(const std::vector<double>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i > 0) s += ", ";
    s += Fmt("%.3f", v[i]);
  }
  return s + "]";
}

double Mean(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) /
         static_cast<double>(v.size());
}

harness::ExperimentConfig Config(const json& overrides, std::uint64_t seed) {
  json j = overrides;
  j["seed"] = seed;
  return harness::ConfigFromJson(j);
}

harness::RunReport Run(const json& overrides, std::uint64_t seed) {
  return harness::RunExperiment(Config(overrides, seed));
}

// Criterion 1.
Outcome GradientOracle() {
  std::size_t archs = 0, checked = 0, kinks = 0;
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    Rng rng(DeriveSeed(seed, "acceptance-fd"));
    const nn::Architecture arch =
        testing::RandomArchitecture(rng, seed % 2 == 0);
    const nn::ParamVector p = testing::RandomParams(arch, rng);
    const datagen::LabeledDataset data = testing::RandomDataset(arch, 6, rng);
    const testing::GradientCheck c = testing::CheckGradient(p, arch, data, 1e-4);
    worst = std::max(worst, c.max_rel_error);
    checked += c.checked;
    kinks += c.kinks;
    ++archs;
  }
  return {worst <= 1e-4 && kinks * 100 <= checked,
          std::to_string(archs) + " architectures (dense+conv+maxpool), " +
              std::to_string(checked) + " params, max rel err " +
              Fmt("%.2e", worst) + ", kink crossings re-checked at h/100: " +
              std::to_string(kinks)};
}

// Criterion 2.
Outcome SensitivityIdentity() {
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    Rng rng(DeriveSeed(seed, "acceptance-identity"));
    const nn::Architecture arch =
        testing::RandomArchitecture(rng, seed % 4 == 0);
    const nn::ParamVector p = testing::RandomParams(arch, rng);
    datagen::AuxiliaryStore aux;
    aux.samples_per_class = 1 + rng.UniformIndex(8);
    const datagen::LabeledDataset all =
        testing::RandomDataset(arch, aux.samples_per_class * 50, rng);
    const auto rows = all.RowsByClass();
    for (std::size_t c = 0; c < arch.n_classes(); ++c) {
      std::vector<std::size_t> take(
          rows[c].begin(),
          rows[c].begin() + std::min(rows[c].size(), aux.samples_per_class));
      aux.per_class.push_back(all.Subset(take));
    }
    const double alpha = std::pow(10.0, -1.0 - 3.0 * rng.Uniform());
    const auto delta = attack::ExtractSensitivity(p, arch, aux, alpha);
    const auto grad = attack::GradientSensitivity(p, arch, aux);
    for (std::size_t c = 0; c < delta.size(); ++c) {
      worst = std::max(worst, testing::RelativeError(delta[c], grad[c], 1e-12));
    }
  }
  return {worst <= 1e-9,
          "100 random (model, aux) pairs, max rel err " + Fmt("%.2e", worst)};
}

// Criterion 3.
Outcome FedAvgAlgebra() {
  double worst = 0.0;
  bool idempotent = true, permutation = true;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    Rng rng(DeriveSeed(seed, "acceptance-fedavg"));
    const nn::Architecture arch = testing::RandomArchitecture(rng, seed % 2 == 0);
    const std::size_t n = 2 + rng.UniformIndex(8);
    std::vector<nn::ParamVector> models;
    std::vector<double> weights;
    for (std::size_t i = 0; i < n; ++i) {
      models.push_back(testing::RandomParams(arch, rng, 5.0));
      weights.push_back(static_cast<double>(1 + rng.UniformIndex(1000)));
    }
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    const nn::ParamVector avg = fedsim::FedAvg(models, weights);
    for (std::size_t k = 0; k < avg.size(); ++k) {
      double oracle = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        oracle += weights[i] / total * models[i][k];
      }
      worst = std::max(worst, std::abs(avg[k] - oracle));
    }
    std::vector<nn::ParamVector> same(n, models[0]);
    idempotent = idempotent && fedsim::FedAvg(same, weights) == models[0];
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    rng.Shuffle(std::span<std::size_t>(order));
    std::vector<nn::ParamVector> pm;
    std::vector<double> pw;
    for (std::size_t i : order) {
      pm.push_back(models[i]);
      pw.push_back(weights[i]);
    }
    permutation = permutation && fedsim::FedAvg(pm, pw) == avg;
  }
  return {worst <= 1e-12 && idempotent && permutation,
          "max abs err vs oracle " + Fmt("%.2e", worst) + ", idempotent " +
              (idempotent ? "yes" : "no") + ", permutation-invariant " +
              (permutation ? "yes" : "no")};
}

// Shared setup for the sensitivity-vs-ratio experiments: a model trained on
// 6,000 synthetic samples with the given class counts, probed with 150
// auxiliary samples per class.
struct SkewedModel {
  nn::Architecture arch;
  nn::ParamVector params;
  datagen::AuxiliaryStore aux;
};

SkewedModel TrainSkewed(const std::vector<std::size_t>& counts,
                        std::uint64_t seed) {
  const std::size_t n_label = counts.size();
  const std::size_t dim = 16;
  const auto means =
      datagen::SyntheticClassMeans(n_label, dim, DeriveSeed(seed, "means"));
  const std::size_t per_class = *std::max_element(counts.begin(), counts.end());
  const datagen::LabeledDataset pool = datagen::SampleBlobs(
      means, per_class, 1.0, DeriveSeed(seed, "pool"));
  const datagen::LabeledDataset train =
      datagen::RealizeCounts(pool, counts, DeriveSeed(seed, "realize"));
  const datagen::LabeledDataset aux_pool = datagen::SampleBlobs(
      means, 150, 1.0, DeriveSeed(seed, "aux-pool"), pool.size());
  SkewedModel m{nn::Architecture::Mlp(dim, {32, 32}, n_label), {}, {}};
  m.aux = datagen::BuildAuxiliary(aux_pool, 150, {}, DeriveSeed(seed, "aux"));
  nn::TrainConfig cfg;
  // One pass, the same budget as a client's local update in a round.
  cfg.epochs = 1;
  cfg.seed = DeriveSeed(seed, "train");
  m.params = nn::Train(nn::InitParams(m.arch, DeriveSeed(seed, "init")), m.arch,
                       train, cfg);
  return m;
}

// Criterion 4.
Outcome MonotoneSensitivity() {
  std::vector<double> ratio, s_a;
  for (int i = 1; i <= 9; ++i) {
    const double r = 0.1 * i;
    const auto a = static_cast<std::size_t>(std::lround(r * 6000));
    const SkewedModel m = TrainSkewed({a, 6000 - a}, 4);
    ratio.push_back(r);
    s_a.push_back(attack::ExtractSensitivity(m.params, m.arch, m.aux, 0.001)[0]);
  }
  bool monotone = true;
  for (std::size_t i = 1; i < s_a.size(); ++i) {
    monotone = monotone && s_a[i] < s_a[i - 1];
  }
  const double rho = testing::Spearman(ratio, s_a);
  return {monotone && rho <= -0.9,
          "S[A] over ratio 0.1..0.9 = " + List(s_a) + ", Spearman " +
              Fmt("%.3f", rho)};
}

// Criterion 5.
Outcome ExtremeRatios() {
  int hits = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    // Class 1 holds 50%, class 8 holds 2%, the rest split evenly.
    std::vector<std::size_t> counts(10, 360);
    counts[1] = 3000;
    counts[8] = 120;
    const SkewedModel m = TrainSkewed(counts, 100 + seed);
    const auto s = attack::ExtractSensitivity(m.params, m.arch, m.aux, 0.001);
    const auto lo = std::min_element(s.begin(), s.end()) - s.begin();
    const auto hi = std::max_element(s.begin(), s.end()) - s.begin();
    if (lo == 1 && hi == 8) ++hits;
  }
  return {hits >= 18, std::to_string(hits) +
                          "/20 seeds with argmin(S) = majority and argmax(S) "
                          "= minority"};
}

// Criterion 6.
Outcome SelectiveAmplifiesDs() {
  // Locked users keep the selective aggregate so both runs differ only in
  // the aggregation policy.
  const json cfg = {{"attack", {{"release_locked", false}}}};
  int wins = 0, total = 0;
  std::string detail;
  for (std::uint64_t seed : {1, 2, 3}) {
    const harness::RunReport r = Run(cfg, seed);
    for (std::size_t i = 0; i < r.ds_attack.size(); ++i) {
      if (r.ds_attack[i].first < 2) continue;
      ++total;
      if (r.ds_attack[i].second > r.ds_fedavg[i].second) ++wins;
    }
  }
  return {total > 0 && wins * 10 >= total * 9,
          std::to_string(wins) + "/" + std::to_string(total) +
              " rounds (>= 2, seeds 1-3) with selective DS > FedAvg DS"};
}

// Criterion 7.
Outcome FederatedBeatsCentralized() {
  std::vector<double> fed, cen;
  for (std::uint64_t seed : {1, 2, 3}) {
    fed.push_back(Run(json::object(), seed).top1);
    cen.push_back(Run({{"attack", {{"algorithm", "centralized"}}}}, seed).top1);
  }
  const double gap = Mean(fed) - Mean(cen);
  return {gap >= 0.15, "federated top-1 " + List(fed) + " vs centralized " +
                           List(cen) + ", gap " + Fmt("%.3f", gap)};
}

// Criteria 8, 9 and 13 share the five end-to-end runs.
struct EndToEnd {
  std::vector<harness::RunReport> runs;
};

const EndToEnd& EndToEndRuns() {
  static const EndToEnd e = [] {
    EndToEnd out;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      out.runs.push_back(Run(json::object(), seed));
    }
    return out;
  }();
  return e;
}

Outcome EndToEndAttack() {
  std::vector<double> t1, t2, t3;
  for (const auto& r : EndToEndRuns().runs) {
    t1.push_back(r.top1);
    t2.push_back(r.top2);
    t3.push_back(r.top3);
  }
  const double m1 = Mean(t1), m2 = Mean(t2), m3 = Mean(t3);
  const bool ordered = m3 >= m2 && m2 >= m1;
  return {m1 >= 0.7 && ordered,
          "mean top-1 " + Fmt("%.3f", m1) + " " + List(t1) + ", top-2 " +
              Fmt("%.3f", m2) + ", top-3 " + Fmt("%.3f", m3) +
              (ordered ? ", ordering holds" : ", ordering top3>=top2>=top1 violated")};
}

Outcome Stealth() {
  double worst = 0.0;
  std::vector<double> deltas;
  for (const auto& r : EndToEndRuns().runs) {
    const double d = std::abs(r.utility_with - r.utility_without);
    deltas.push_back(d);
    worst = std::max(worst, d);
  }
  return {worst <= 0.02,
          "|utility with - without| per seed " + List(deltas)};
}

Outcome Determinism() {
  const harness::RunReport& first = EndToEndRuns().runs.front();
  const harness::RunReport again = Run(json::object(), 1);
  const bool same = first.ToJson().dump() == again.ToJson().dump();
  return {same, std::string("seed-1 end-to-end report rerun is ") +
                    (same ? "bit-identical" : "different")};
}

// Criterion 10.
json AuxSweepConfig(std::size_t aux) {
  return {{"dataset", {{"separation", 3.0}}},
          {"federation", {{"n_user", 20}}},
          {"attack", {{"aux_per_class", aux}}}};
}

Outcome AuxiliarySize() {
  std::vector<double> acc;
  for (std::size_t aux : {20, 100, 150}) {
    std::vector<double> t;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      t.push_back(Run(AuxSweepConfig(aux), seed).top1);
    }
    acc.push_back(Mean(t));
  }
  const bool ok = acc[2] - acc[1] >= 0.02 && acc[1] - acc[0] >= 0.02;
  return {ok, "mean top-1 at aux 20/100/150 = " + List(acc)};
}

// Criterion 11.
Outcome XSweep() {
  std::vector<double> acc;
  for (std::size_t x = 1; x <= 11; ++x) {
    std::vector<double> t;
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      t.push_back(Run({{"federation", {{"n_user", 12}}},
                       {"attack", {{"x", x}}}},
                      seed)
                      .top1);
    }
    acc.push_back(Mean(t));
  }
  const double low = (acc[0] + acc[1] + acc[2] + acc[3]) / 4.0;
  return {low - acc[10] >= 0.1, "top-1 for x = 1..11: " + List(acc) +
                                    ", mean(x<=4) - acc(x=11) = " +
                                    Fmt("%.3f", low - acc[10])};
}

// Criterion 12.
Outcome DefenseDirection() {
  const defense::DefenseSweep sweep = defense::StandardSweep();
  std::vector<double> attack(sweep.variants.size(), 0.0);
  std::vector<double> utility(sweep.variants.size(), 0.0);
  const std::vector<std::uint64_t> seeds = {1, 2, 3};
  for (std::uint64_t seed : seeds) {
    const harness::ExperimentConfig cfg = Config(json::object(), seed);
    const auto rows = harness::RunDefenseSweep(cfg, sweep);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      attack[i] += rows[i].attack_acc_top1 / static_cast<double>(seeds.size());
      utility[i] += rows[i].model_utility / static_cast<double>(seeds.size());
    }
  }
  // Variants: none, dropout, dp-0.05, dp-0.25, dp-1, dp-4.
  int inversions = 0;
  bool small = true;
  for (std::size_t i = 3; i < 6; ++i) {
    const double rise = attack[i] - attack[i - 1];
    if (rise > 0.0) {
      ++inversions;
      small = small && rise <= 0.03;
    }
  }
  const bool monotone = inversions <= 1 && small;
  const bool utility_drops = utility[5] < utility[2];
  const double dropout_drop = attack[0] - attack[1];
  const bool dropout_ok = dropout_drop <= 0.05;
  return {monotone && utility_drops && dropout_ok,
          "attack top-1 none/dropout/dp-0.05/0.25/1/4 = " + List(attack) +
              ", utility = " + List(utility) + ", dropout drop " +
              Fmt("%.3f", dropout_drop)};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace
}  // namespace ppa::acceptance

int main(int argc, char** argv) {
  using namespace ppa::acceptance;
  const std::vector<Criterion> all = {
      {1, "gradient oracle", GradientOracle},
      {2, "sensitivity delta/gradient identity", SensitivityIdentity},
      {3, "FedAvg algebra", FedAvgAlgebra},
      {4, "sensitivity monotone in class ratio", MonotoneSensitivity},
      {5, "sensitivity extremes", ExtremeRatios},
      {6, "selective aggregation amplifies DS", SelectiveAmplifiesDs},
      {7, "federated meta-data beats centralized", FederatedBeatsCentralized},
      {8, "end-to-end attack accuracy", EndToEndAttack},
      {9, "stealth", Stealth},
      {10, "auxiliary size direction", AuxiliarySize},
      {11, "x sweep direction", XSweep},
      {12, "defense direction", DefenseDirection},
      {13, "determinism", Determinism},
  };
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));
  int failed = 0;
  for (const Criterion& c : all) {
    if (!wanted.empty() && !wanted.contains(c.id)) continue;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("criterion %2d %s  %s: %s\n", c.id, o.pass ? "PASS" : "FAIL",
                c.name, o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
