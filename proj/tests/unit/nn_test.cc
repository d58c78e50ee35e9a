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


#include <cmath>
#include <filesystem>
#include <limits>
#include <numeric>
#include <vector>

#include <gtest/gtest.h>

#include "ppa/common/error.h"
#include "ppa/common/rng.h"
#include "ppa/datagen/synthetic.h"
#include "ppa/nn/architecture.h"
#include "ppa/nn/checkpoint.h"
#include "ppa/nn/engine.h"
#include "ppa/nn/param_vector.h"
#include "ppa/nn/train.h"
#include "test_util.h"

namespace ppa::nn {
namespace {

using datagen::LabeledDataset;

ParamVector Zeros(const Architecture& arch) {
  return ParamVector(ParamLayout(arch));
}

TEST(ArchitectureTest, MlpMarksLastHiddenDenseAsFeatureLayer) {
  Architecture arch = Architecture::Mlp(4, {8, 6}, 3);
  EXPECT_EQ(arch.feature_layer(), 2u);
  EXPECT_TRUE(arch.layers()[2].feature_layer);
}

TEST(ArchitectureTest, ConvNetMarksLastConv) {
  Architecture arch({Conv2d(1, 2, 3), Relu(), Conv2d(2, 2, 2), Relu(),
                     Dense(2 * 5 * 5, 4)},
                    {1, 8, 8}, 4);
  EXPECT_EQ(arch.feature_layer(), 2u);
}

TEST(ArchitectureTest, RejectsBrokenChain) {
  EXPECT_THROW(Architecture({Dense(4, 5), Relu(), Dense(6, 3)}, {4}, 3),
               InputError);
  EXPECT_THROW(Architecture({Dense(4, 5)}, {4}, 3), InputError);
}

TEST(ArchitectureTest, JsonRoundTrip) {
  Architecture arch({Conv2d(1, 2, 3), Relu(), MaxPool(2), Dense(18, 4)},
                    {1, 8, 8}, 4);
  EXPECT_EQ(Architecture::FromJson(arch.ToJson()), arch);
}

TEST(ParamLayoutTest, SlicesAreContiguous) {
  Architecture arch = Architecture::Mlp(5, {7, 3}, 4);
  ParamLayout layout(arch);
  std::size_t expected = 0;
  for (const LayerSlice& s : layout.slices()) {
    EXPECT_EQ(s.offset, expected);
    expected += s.length;
  }
  EXPECT_EQ(layout.total(), expected);
  EXPECT_EQ(layout.total(), (5 * 7 + 7) + (7 * 3 + 3) + (3 * 4 + 4));
}

TEST(ForwardTest, ZeroWeightsGiveUniformLoss) {
  Architecture arch = Architecture::Mlp(6, {5}, 10);
  Rng rng(1);
  LabeledDataset data = testing::RandomDataset(arch, 7, rng);
  const auto refs = data.Refs();
  ForwardResult r = Forward(Zeros(arch), arch, refs);
  EXPECT_NEAR(r.mean_loss, std::log(10.0), 1e-12);
  for (const auto& row : r.logits) {
    for (double v : row) EXPECT_EQ(v, row[0]);
  }
}

TEST(ForwardTest, SaturatedCorrectLogitHasNearZeroLoss) {
  Architecture arch({Dense(2, 2)}, {2}, 2);
  ParamVector p = Zeros(arch);
  p[0] = 50.0;  // w[0][0]
  p[3] = 50.0;  // w[1][1]
  LabeledDataset data({2}, 2);
  data.Add(std::vector<double>{1.0, 0.0}, 0, 0);
  data.Add(std::vector<double>{0.0, 1.0}, 1, 1);
  const auto refs = data.Refs();
  EXPECT_LT(Forward(p, arch, refs).mean_loss, 1e-12);
  EXPECT_LT(L2Norm(Backward(p, arch, refs).values()), 1e-6);
}

TEST(ForwardTest, MatchesScalarLoopOracle) {
  Architecture arch = Architecture::Mlp(4, {6}, 3);
  Rng rng(7);
  ParamVector p = testing::RandomParams(arch, rng);
  LabeledDataset data = testing::RandomDataset(arch, 8, rng);

  // Oracle: explicit loops over the documented row-major dense layout.
  const double* w1 = p.LayerValues(0).data();
  const double* b1 = w1 + 4 * 6;
  const double* w2 = p.LayerValues(2).data();
  const double* b2 = w2 + 6 * 3;
  double total = 0.0;
  for (std::size_t n = 0; n < data.size(); ++n) {
    auto x = data.features(n);
    double h[6];
    for (int j = 0; j < 6; ++j) {
      double s = b1[j];
      for (int k = 0; k < 4; ++k) s += w1[j * 4 + k] * x[k];
      h[j] = s > 0.0 ? s : 0.0;
    }
    double z[3];
    for (int c = 0; c < 3; ++c) {
      z[c] = b2[c];
      for (int j = 0; j < 6; ++j) z[c] += w2[c * 6 + j] * h[j];
    }
    double m = std::max({z[0], z[1], z[2]});
    double lse = m + std::log(std::exp(z[0] - m) + std::exp(z[1] - m) +
                              std::exp(z[2] - m));
    total += lse - z[data.label(n)];
  }
  const double oracle = total / static_cast<double>(data.size());
  EXPECT_LE(testing::RelativeError(testing::BatchLoss(p, arch, data), oracle),
            1e-6);
}

TEST(BackwardTest, LogisticHandDerivation) {
  // Two-logit softmax with only the class-1 weight free: dL/dw = sigma(0) - 1.
  Architecture arch({Dense(1, 2)}, {1}, 2);
  LabeledDataset data({1}, 2);
  data.Add(std::vector<double>{1.0}, 1, 0);
  const auto refs = data.Refs();
  GradientVector g = Backward(Zeros(arch), arch, refs);
  EXPECT_DOUBLE_EQ(g[1], -0.5);
  EXPECT_DOUBLE_EQ(g[0], 0.5);
}

TEST(BackwardTest, MatchesFiniteDifferencesOnRandomArchitectures) {
  std::size_t checked = 0, kinks = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    Rng rng(seed);
    Architecture arch = testing::RandomArchitecture(rng, seed % 2 == 0);
    ParamVector p = testing::RandomParams(arch, rng);
    LabeledDataset data = testing::RandomDataset(arch, 5, rng);
    testing::GradientCheck c = testing::CheckGradient(p, arch, data, 1e-4);
    EXPECT_LE(c.max_rel_error, 1e-4) << "seed " << seed;
    checked += c.checked;
    kinks += c.kinks;
  }
  EXPECT_LE(kinks * 100, checked);
}

TEST(BackwardTest, IsPure) {
  Rng rng(3);
  Architecture arch = testing::RandomArchitecture(rng, true);
  ParamVector p = testing::RandomParams(arch, rng);
  const ParamVector before = p;
  LabeledDataset data = testing::RandomDataset(arch, 4, rng);
  const auto refs = data.Refs();
  GradientVector a = Backward(p, arch, refs);
  GradientVector b = Backward(p, arch, refs);
  EXPECT_EQ(a, b);
  EXPECT_EQ(p, before);
}

TEST(DropoutTest, EvaluationModeIsIdentity) {
  Architecture with = Architecture::Mlp(4, {6}, 3, 0.5);
  Architecture without = Architecture::Mlp(4, {6}, 3);
  Rng rng(11);
  ParamVector p = testing::RandomParams(with, rng);
  ParamVector q(ParamLayout(without),
                std::vector<double>(p.values().begin(), p.values().end()));
  LabeledDataset data = testing::RandomDataset(with, 6, rng);
  const auto refs = data.Refs();
  EXPECT_EQ(Forward(p, with, refs).logits, Forward(q, without, refs).logits);
}

TEST(SgdStepTest, Arithmetic) {
  Architecture arch({Dense(1, 1)}, {1}, 1);
  ParamLayout layout(arch);
  ParamVector p(layout, {2.0, 0.0});
  GradientVector g(layout, {1.0, 0.0});
  EXPECT_EQ(SgdStep(p, g, 0.5)[0], 1.5);
  EXPECT_EQ(SgdStep(p, GradientVector(layout), 0.5), p);
}

TEST(SgdStepTest, TwoStepsDifferFromOneSummedStepOnCurvedLoss) {
  Architecture arch = Architecture::Mlp(3, {4}, 2);
  Rng rng(5);
  ParamVector p = testing::RandomParams(arch, rng);
  LabeledDataset data = testing::RandomDataset(arch, 6, rng);
  const auto refs = data.Refs();
  GradientVector g0 = Backward(p, arch, refs);
  ParamVector two = SgdStep(p, g0, 0.3);
  two = SgdStep(two, Backward(two, arch, refs), 0.3);
  GradientVector doubled = g0;
  for (double& v : doubled.values()) v *= 2.0;
  EXPECT_NE(two, SgdStep(p, doubled, 0.3));
}

TEST(TrainTest, ZeroEpochsIsNoOp) {
  Architecture arch = Architecture::Mlp(3, {4}, 2);
  Rng rng(2);
  ParamVector p = testing::RandomParams(arch, rng);
  LabeledDataset data = testing::RandomDataset(arch, 8, rng);
  TrainConfig cfg;
  cfg.epochs = 0;
  cfg.batch_size = 4;
  EXPECT_EQ(Train(p, arch, data, cfg), p);
}

TEST(TrainTest, SeparableBlobsReachFullAccuracy) {
  LabeledDataset data = datagen::MakeSynthetic(2, 4, 50, 9);
  Architecture arch = Architecture::Mlp(4, {8}, 2);
  TrainConfig cfg;
  cfg.epochs = 50;
  cfg.batch_size = 10;
  cfg.seed = 4;
  ParamVector trained = Train(InitParams(arch, 1), arch, data, cfg);
  const auto refs = data.Refs();
  EXPECT_EQ(Accuracy(trained, arch, refs), 1.0);
}

TEST(TrainTest, SameSeedIsBitIdentical) {
  LabeledDataset data = datagen::MakeSynthetic(3, 4, 30, 9);
  Architecture arch = Architecture::Mlp(4, {8}, 3, 0.5);
  TrainConfig cfg;
  cfg.epochs = 3;
  cfg.batch_size = 8;
  cfg.dropout_enabled = true;
  cfg.seed = 12;
  ParamVector init = InitParams(arch, 3);
  EXPECT_EQ(Train(init, arch, data, cfg), Train(init, arch, data, cfg));
  cfg.dp = defense::DpConfig{1.0, 0.5};
  EXPECT_EQ(Train(init, arch, data, cfg), Train(init, arch, data, cfg));
}

TEST(TrainTest, RejectsBadConfig) {
  LabeledDataset data = datagen::MakeSynthetic(2, 2, 3, 1);
  Architecture arch = Architecture::Mlp(2, {3}, 2);
  TrainConfig cfg;
  cfg.batch_size = 100;
  EXPECT_THROW(Train(InitParams(arch, 1), arch, data, cfg), InputError);
  cfg.batch_size = 2;
  cfg.learning_rate = 0.0;
  EXPECT_THROW(Train(InitParams(arch, 1), arch, data, cfg), ConfigError);
}

TEST(TrainTest, DefaultSyntheticTaskIsLearnable) {
  LabeledDataset train = datagen::MakeSynthetic(10, 16, 100, 21);
  LabeledDataset test = datagen::SampleBlobs(
      datagen::SyntheticClassMeans(10, 16, 21), 50, 1.0, 99);
  Architecture arch = Architecture::Mlp(16, {32, 32}, 10);
  TrainConfig cfg;
  cfg.epochs = 50;
  cfg.seed = 8;
  ParamVector trained = Train(InitParams(arch, 2), arch, train, cfg);
  const auto refs = test.Refs();
  EXPECT_GE(Accuracy(trained, arch, refs), 0.9);
}

TEST(InitTest, GlorotBounds) {
  Architecture arch = Architecture::Mlp(10, {20}, 5);
  ParamVector p = InitParams(arch, 77);
  const double bound = std::sqrt(6.0 / 30.0);
  for (double v : p.LayerValues(0)) EXPECT_LE(std::abs(v), bound);
  EXPECT_EQ(p, InitParams(arch, 77));
  EXPECT_NE(p, InitParams(arch, 78));
}

class DpSgdTest : public ::testing::Test {
 protected:
  Architecture arch_ = Architecture({Dense(2, 2)}, {2}, 2);
  ParamLayout layout_{arch_};
};

TEST_F(DpSgdTest, NoNoiseNoClipEqualsSgdOnMean) {
  Rng rng(1);
  std::vector<GradientVector> grads;
  for (int i = 0; i < 4; ++i) {
    GradientVector g(layout_);
    for (double& v : g.values()) v = rng.Uniform(-0.1, 0.1);
    grads.push_back(g);
  }
  GradientVector mean(layout_);
  for (const auto& g : grads) {
    for (std::size_t i = 0; i < g.size(); ++i) mean[i] += g[i] / 4.0;
  }
  ParamVector p(layout_);
  Rng noise(2);
  ParamVector dp = DpSgdStep(p, grads, 10.0, 0.0, 0.1, noise);
  ParamVector plain = SgdStep(p, mean, 0.1);
  for (std::size_t i = 0; i < p.size(); ++i) {
    EXPECT_NEAR(dp[i], plain[i], 1e-15);
  }
}

TEST_F(DpSgdTest, ClipsLargeGradient) {
  GradientVector g(layout_);
  g[0] = 6.0;
  g[1] = 8.0;  // norm 10
  std::vector<GradientVector> grads = {g};
  Rng rng(1);
  GradientVector out = PrivatizeGradients(grads, 1.0, 0.0, rng);
  EXPECT_DOUBLE_EQ(out[0], 0.6);
  EXPECT_DOUBLE_EQ(out[1], 0.8);
  EXPECT_LE(L2Norm(out.values()), L2Norm(g.values()));
}

TEST_F(DpSgdTest, ClippingNeverIncreasesNorm) {
  Rng rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    GradientVector g(layout_);
    const double scale = rng.Uniform(0.0, 5.0);
    for (double& v : g.values()) v = rng.Normal() * scale;
    std::vector<GradientVector> grads = {g};
    GradientVector out = PrivatizeGradients(grads, 1.0, 0.0, rng);
    EXPECT_LE(L2Norm(out.values()), L2Norm(g.values()) + 1e-12);
    EXPECT_LE(L2Norm(out.values()), 1.0 + 1e-12);
  }
}

TEST_F(DpSgdTest, NoiseStdMatchesClipOverBatch) {
  const std::size_t batch = 4;
  std::vector<GradientVector> grads(batch, GradientVector(layout_));
  Rng rng(99);
  const int reps = 10000;
  std::vector<double> sum(layout_.total()), sq(layout_.total());
  for (int r = 0; r < reps; ++r) {
    GradientVector out = PrivatizeGradients(grads, 2.0, 1.0, rng);
    for (std::size_t i = 0; i < out.size(); ++i) {
      sum[i] += out[i];
      sq[i] += out[i] * out[i];
    }
  }
  const double expected = 2.0 / static_cast<double>(batch);
  for (std::size_t i = 0; i < sum.size(); ++i) {
    const double mean = sum[i] / reps;
    const double sd = std::sqrt(sq[i] / reps - mean * mean);
    EXPECT_NEAR(sd, expected, 0.05 * expected);
  }
}

TEST(CheckpointTest, RoundTripAtFloatPrecision) {
  Rng rng(6);
  Architecture arch = testing::RandomArchitecture(rng, true);
  ParamVector p = testing::RandomParams(arch, rng);
  Checkpoint c = DecodeCheckpoint(EncodeCheckpoint(arch, p));
  EXPECT_EQ(c.arch, arch);
  ASSERT_EQ(c.params.size(), p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    EXPECT_EQ(c.params[i], static_cast<double>(static_cast<float>(p[i])));
  }
}

TEST(CheckpointTest, RejectsBadMagicAndTruncation) {
  Architecture arch = Architecture::Mlp(2, {2}, 2);
  std::vector<std::uint8_t> bytes = EncodeCheckpoint(arch, InitParams(arch, 1));
  std::vector<std::uint8_t> bad = bytes;
  bad[0] = 'X';
  EXPECT_THROW(DecodeCheckpoint(bad), FormatError);
  bytes.pop_back();
  EXPECT_THROW(DecodeCheckpoint(bytes), FormatError);
}

TEST(CheckpointTest, FileRoundTrip) {
  Architecture arch = Architecture::Mlp(3, {4}, 2);
  ParamVector p = InitParams(arch, 5);
  const auto path =
      std::filesystem::temp_directory_path() / "ppa_nn_test_model.ppam";
  SaveCheckpoint(path, arch, p);
  Checkpoint c = LoadCheckpoint(path);
  std::filesystem::remove(path);
  EXPECT_EQ(c.arch, arch);
  EXPECT_THROW(LoadCheckpoint(path), IoError);
}

}  // namespace
}  // namespace ppa::nn
