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

#include <benchmark/benchmark.h>

#include <vector>

#include "ppa/attack/sensitivity.h"
#include "ppa/datagen/auxiliary.h"
#include "ppa/datagen/synthetic.h"
#include "ppa/fedsim/fedavg.h"
#include "ppa/nn/architecture.h"
#include "ppa/nn/engine.h"

namespace {

void BM_ExtractSensitivity(benchmark::State& state) {
  const auto per_class = static_cast<std::size_t>(state.range(0));
  const ppa::nn::Architecture arch = ppa::nn::Architecture::Mlp(16, {32, 32}, 10);
  const ppa::nn::ParamVector model = ppa::nn::InitParams(arch, 1);
  const auto pool = ppa::datagen::MakeSynthetic(10, 16, per_class, 2);
  const auto aux = ppa::datagen::BuildAuxiliary(pool, per_class, {}, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        ppa::attack::ExtractSensitivity(model, arch, aux, 0.001));
  }
}
BENCHMARK(BM_ExtractSensitivity)->Arg(20)->Arg(150);

void BM_FedAvg(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const ppa::nn::Architecture arch = ppa::nn::Architecture::Mlp(16, {32, 32}, 10);
  std::vector<ppa::nn::ParamVector> models;
  std::vector<double> weights;
  for (std::size_t i = 0; i < n; ++i) {
    models.push_back(ppa::nn::InitParams(arch, i));
    weights.push_back(static_cast<double>(100 + i));
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(ppa::fedsim::FedAvg(models, weights));
  }
}
BENCHMARK(BM_FedAvg)->Arg(5)->Arg(100);

}  // namespace
