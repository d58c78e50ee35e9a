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

#include "ppa/common/rng.h"
#include "ppa/datagen/synthetic.h"
#include "ppa/nn/architecture.h"
#include "ppa/nn/engine.h"
#include "ppa/nn/train.h"

namespace {

void BM_MlpForwardBackward(benchmark::State& state) {
  const auto batch = static_cast<std::size_t>(state.range(0));
  const ppa::nn::Architecture arch = ppa::nn::Architecture::Mlp(16, {32, 32}, 10);
  const ppa::nn::ParamVector model = ppa::nn::InitParams(arch, 1);
  const auto data = ppa::datagen::MakeSynthetic(10, 16, batch / 10 + 1, 2);
  auto refs = data.Refs();
  refs.resize(batch);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ppa::nn::ForwardBackward(model, arch, refs));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(batch));
}
BENCHMARK(BM_MlpForwardBackward)->Arg(1)->Arg(32)->Arg(150);

void BM_ConvForwardBackward(benchmark::State& state) {
  const ppa::nn::Architecture arch(
      {ppa::nn::Conv2d(1, 4, 3), ppa::nn::Relu(), ppa::nn::Conv2d(4, 8, 3),
       ppa::nn::Relu(), ppa::nn::MaxPool(2), ppa::nn::Dense(8 * 5 * 5, 10)},
      {1, 14, 14}, 10);
  const ppa::nn::ParamVector model = ppa::nn::InitParams(arch, 3);
  ppa::Rng rng(4);
  std::vector<std::vector<double>> xs(32, std::vector<double>(196));
  std::vector<ppa::nn::SampleRef> refs;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (double& v : xs[i]) v = rng.Uniform();
    refs.push_back({xs[i], static_cast<int>(i % 10)});
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(ppa::nn::ForwardBackward(model, arch, refs));
  }
  state.SetItemsProcessed(state.iterations() * 32);
}
BENCHMARK(BM_ConvForwardBackward);

void BM_TrainEpoch(benchmark::State& state) {
  const ppa::nn::Architecture arch = ppa::nn::Architecture::Mlp(16, {32, 32}, 10);
  const ppa::nn::ParamVector model = ppa::nn::InitParams(arch, 1);
  const auto data = ppa::datagen::MakeSynthetic(10, 16, 60, 2);
  ppa::nn::TrainConfig cfg;
  if (state.range(0) != 0) cfg.dp = ppa::defense::DpConfig{1.0, 1.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(ppa::nn::Train(model, arch, data, cfg));
  }
}
BENCHMARK(BM_TrainEpoch)->Arg(0)->Arg(1);

}  // namespace
