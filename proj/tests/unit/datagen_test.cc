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


#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numeric>
#include <vector>

#include <gmock/gmock.h>
#include <gtest/gtest.h>

#include "ppa/common/error.h"
#include "ppa/common/rng.h"
#include "ppa/datagen/auxiliary.h"
#include "ppa/datagen/dataset.h"
#include "ppa/datagen/idx.h"
#include "ppa/datagen/metrics.h"
#include "ppa/datagen/partition.h"
#include "ppa/datagen/synthetic.h"

namespace ppa::datagen {
namespace {

using ::testing::ElementsAre;
using ::testing::HasSubstr;

std::vector<std::uint8_t> Header(std::uint8_t type, std::uint8_t dims,
                                 std::vector<std::uint32_t> sizes) {
  std::vector<std::uint8_t> out = {0, 0, type, dims};
  for (std::uint32_t s : sizes) {
    out.push_back(static_cast<std::uint8_t>(s >> 24));
    out.push_back(static_cast<std::uint8_t>(s >> 16));
    out.push_back(static_cast<std::uint8_t>(s >> 8));
    out.push_back(static_cast<std::uint8_t>(s));
  }
  return out;
}

TEST(IdxTest, DecodesUbyteImagesToUnitRange) {
  std::vector<std::uint8_t> images = Header(0x08, 3, {1, 2, 2});
  images.insert(images.end(), {0, 255, 128, 64});
  std::vector<std::uint8_t> labels = Header(0x08, 1, {1});
  labels.push_back(3);
  LabeledDataset d = DecodeIdx(images, labels, 10);
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d.label(0), 3);
  auto f = d.features(0);
  EXPECT_EQ(f[0], 0.0);
  EXPECT_EQ(f[1], 1.0);
  EXPECT_NEAR(f[2], 0.50196, 1e-5);
  EXPECT_NEAR(f[3], 0.25098, 1e-5);
  EXPECT_THAT(d.feature_shape(), ElementsAre(1, 2, 2));
}

TEST(IdxTest, LabelsWithImageMagicAreRejected) {
  std::vector<std::uint8_t> images = Header(0x08, 3, {1, 2, 2});
  images.insert(images.end(), {0, 255, 128, 64});
  std::vector<std::uint8_t> labels = Header(0x08, 3, {1, 2, 2});
  labels.insert(labels.end(), {0, 0, 0, 0});
  try {
    DecodeIdx(images, labels);
    FAIL() << "expected FormatError";
  } catch (const FormatError& e) {
    EXPECT_THAT(e.what(), HasSubstr("bad magic"));
  }
}

TEST(IdxTest, TruncatedBodyIsRejected) {
  std::vector<std::uint8_t> images = Header(0x08, 3, {2, 2, 2});
  images.insert(images.end(), {0, 1, 2, 3});
  std::vector<std::uint8_t> labels = Header(0x08, 1, {2});
  labels.insert(labels.end(), {0, 1});
  EXPECT_THROW(DecodeIdx(images, labels), FormatError);
}

TEST(IdxTest, WriteThenLoadReproducesSamples) {
  LabeledDataset d = MakeSynthetic(4, 6, 5, 3);
  const auto dir = std::filesystem::temp_directory_path();
  const auto img = dir / "ppa_datagen_test_images.idx";
  const auto lbl = dir / "ppa_datagen_test_labels.idx";
  WriteIdx(d, img, lbl);
  LabeledDataset back = LoadIdx(img, lbl, 4);
  std::filesystem::remove(img);
  std::filesystem::remove(lbl);
  ASSERT_EQ(back.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    EXPECT_EQ(back.label(i), d.label(i));
    auto a = d.features(i);
    auto b = back.features(i);
    EXPECT_TRUE(std::equal(a.begin(), a.end(), b.begin()));
  }
}

TEST(IdxTest, MissingFileIsIoError) {
  EXPECT_THROW(LoadIdx("/nonexistent/a.idx", "/nonexistent/b.idx"), IoError);
}

TEST(SyntheticTest, SameSeedSameBytes) {
  EXPECT_EQ(MakeSynthetic(5, 8, 20, 42), MakeSynthetic(5, 8, 20, 42));
  EXPECT_NE(MakeSynthetic(5, 8, 20, 42), MakeSynthetic(5, 8, 20, 43));
}

TEST(SyntheticTest, TightClustersAreNearestCentroidSeparable) {
  SyntheticOptions opt;
  opt.sigma = 1e-6;
  const auto means = SyntheticClassMeans(2, 4, 5, opt);
  LabeledDataset d = SampleBlobs(means, 50, opt.sigma, 6);
  for (std::size_t i = 0; i < d.size(); ++i) {
    auto f = d.features(i);
    double best = 1e300;
    int arg = -1;
    for (int c = 0; c < 2; ++c) {
      double s = 0.0;
      for (std::size_t k = 0; k < f.size(); ++k) {
        s += (f[k] - means[c][k]) * (f[k] - means[c][k]);
      }
      if (s < best) {
        best = s;
        arg = c;
      }
    }
    EXPECT_EQ(arg, d.label(i));
  }
}

TEST(SyntheticTest, MeansRespectMinimumDistance) {
  const auto means = SyntheticClassMeans(10, 16, 1);
  for (std::size_t a = 0; a < means.size(); ++a) {
    for (std::size_t b = a + 1; b < means.size(); ++b) {
      double s = 0.0;
      for (std::size_t k = 0; k < 16; ++k) {
        s += (means[a][k] - means[b][k]) * (means[a][k] - means[b][k]);
      }
      EXPECT_GE(std::sqrt(s), 5.0);
    }
  }
}

DistributionSpec Spec(std::size_t total, double cp, double cd, int pref = 0,
                      int second = 1) {
  DistributionSpec s;
  s.total_size = total;
  s.cp = cp;
  s.cd = cd;
  s.preference_class = pref;
  s.second_class = second;
  return s;
}

TEST(AllocateTest, EvenRemainderSplit) {
  EXPECT_THAT(AllocateClassCounts(Spec(100, 0.4, 0.2)),
              ElementsAre(40, 20, 5, 5, 5, 5, 5, 5, 5, 5));
}

TEST(AllocateTest, RemainderGoesToLowestIndices) {
  // rest = 100 - 50 - 30 = 20 over 8 classes: 3,3,3,3,2,2,2,2.
  EXPECT_THAT(AllocateClassCounts(Spec(100, 0.5, 0.2, 4, 0)),
              ElementsAre(30, 3, 3, 3, 50, 3, 2, 2, 2, 2));
}

TEST(AllocateTest, FullPreferenceForcesZeroDominance) {
  std::vector<std::size_t> counts = AllocateClassCounts(Spec(50, 1.0, 0.3));
  EXPECT_EQ(counts[0], 50u);
  EXPECT_EQ(std::accumulate(counts.begin(), counts.end(), std::size_t{0}),
            50u);
  EXPECT_EQ(ClassDominance(counts), 0.0);
  EXPECT_EQ(ClassProportion(counts), 1.0);
}

TEST(AllocateTest, PaperCaseStudyProportion) {
  DistributionSpec s = Spec(4000, 0.35, 0.325);
  std::vector<std::size_t> counts = AllocateClassCounts(s);
  EXPECT_NEAR(ClassProportion(counts), 0.35, 0.00025);
}

TEST(AllocateTest, InfeasibleSpecsAreConfigErrors) {
  EXPECT_THROW(AllocateClassCounts(Spec(100, 0.4, 0.5)), ConfigError);
  EXPECT_THROW(AllocateClassCounts(Spec(100, 0.05, 0.0)), ConfigError);
  EXPECT_THROW(AllocateClassCounts(Spec(100, 0.0, 0.0)), ConfigError);
  EXPECT_THROW(AllocateClassCounts(Spec(0, 0.5, 0.1)), ConfigError);
  EXPECT_THROW(AllocateClassCounts(Spec(100, 0.5, 0.1, 0, 0)), ConfigError);
}

TEST(AllocateTest, MinorityModeMirrorsMajority) {
  DistributionSpec s = Spec(100, 0.02, 0.03);
  s.mode = PreferenceMode::kMinority;
  std::vector<std::size_t> counts = AllocateClassCounts(s);
  EXPECT_EQ(counts[0], 2u);
  EXPECT_EQ(counts[1], 5u);
  EXPECT_EQ(PreferenceOf(counts, PreferenceMode::kMinority), 0);
  EXPECT_NEAR(ClassDominance(counts, PreferenceMode::kMinority), 0.03, 1e-12);
}

// Random feasible specs realize exactly and round-trip CP (and CD when no
// remainder class outranks the second class).
TEST(RealizeTest, PropertyCountsAndRoundTrip) {
  LabeledDataset pool = MakeSynthetic(10, 4, 400, 17);
  Rng rng(2024);
  int checked = 0;
  for (int trial = 0; trial < 300; ++trial) {
    DistributionSpec s;
    s.total_size = 20 + rng.UniformIndex(300);
    s.cp = rng.Uniform(0.15, 1.0);
    s.cd = rng.Uniform(0.0, s.cp);
    s.preference_class = static_cast<int>(rng.UniformIndex(10));
    s.second_class = (s.preference_class + 1 + static_cast<int>(rng.UniformIndex(9))) % 10;
    std::vector<std::size_t> expected;
    try {
      expected = AllocateClassCounts(s);
    } catch (const ConfigError&) {
      continue;
    }
    ++checked;
    LabeledDataset d = RealizeDistribution(pool, s, rng.NextU64());
    ASSERT_EQ(d.size(), s.total_size);
    EXPECT_EQ(d.ClassCounts(), expected);
    const auto counts = d.ClassCounts();
    const double tol = 1.0 / static_cast<double>(s.total_size) + 1e-12;
    EXPECT_NEAR(ClassProportion(counts), s.cp, tol);
    if (CdIsRealizable(s) && counts[s.preference_class] != s.total_size) {
      EXPECT_NEAR(ClassDominance(counts), s.cd, tol);
    }
    const double cd = ClassDominance(counts);
    EXPECT_GE(cd, 0.0);
    EXPECT_LE(cd, 1.0);
  }
  EXPECT_GT(checked, 100);
}

TEST(RealizeTest, HonoursExclusionsAndDeterminism) {
  LabeledDataset pool = MakeSynthetic(3, 2, 30, 5);
  std::vector<std::size_t> excluded;
  for (std::size_t i = 0; i < pool.size(); i += 2) excluded.push_back(pool.origin(i));
  std::vector<std::size_t> counts = {10, 5, 5};
  LabeledDataset a = RealizeCounts(pool, counts, 9, excluded);
  EXPECT_EQ(a, RealizeCounts(pool, counts, 9, excluded));
  for (std::size_t o : a.origins()) {
    EXPECT_FALSE(std::binary_search(excluded.begin(), excluded.end(), o));
  }
  std::vector<std::size_t> too_many = {20, 0, 0};
  EXPECT_THROW(RealizeCounts(pool, too_many, 9, excluded), InputError);
}

TEST(MetricsTest, ProportionAndDominanceArithmetic) {
  std::vector<std::size_t> counts = {40, 20, 5, 5, 5, 5, 5, 5, 5, 5};
  EXPECT_DOUBLE_EQ(ClassProportion(counts), 0.40);
  EXPECT_DOUBLE_EQ(ClassDominance(counts), 0.20);
  EXPECT_EQ(PreferenceOf(counts, PreferenceMode::kMajority), 0);
}

TEST(MetricsTest, UserDispersionFiveThreeTwo) {
  std::vector<int> prefs = {0, 0, 0, 0, 0, 1, 1, 1, 2, 2};
  EXPECT_DOUBLE_EQ(UserDispersion(prefs, 3), 0.30);
}

TEST(MetricsTest, EqualSizesHaveZeroImbalance) {
  std::vector<std::size_t> sizes(7, 600);
  EXPECT_EQ(ImbalanceDegree(sizes), 0.0);
  std::vector<std::size_t> mixed = {1, 3};
  EXPECT_DOUBLE_EQ(ImbalanceDegree(mixed), 2.0);
}

TEST(MetricsTest, PropertyRangesOnRandomFederations) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    FederationParams p;
    p.n_user = 5 + seed % 6;
    p.samples_per_user = 100;
    FederationSpec spec = MakeFederationSpec(p, seed);
    LabeledDataset pool = MakeSynthetic(10, 2, 500, seed);
    Federation fed = RealizeFederation(pool, spec, seed);
    FederationMetrics m = ComputeMetrics(fed.clients);
    EXPECT_GE(m.ud, 0.0);
    EXPECT_LE(m.ud, 1.0);
    for (std::size_t u = 0; u < p.n_user; ++u) {
      EXPECT_GT(m.cp[u], 0.0);
      EXPECT_LE(m.cp[u], 1.0);
      EXPECT_GE(m.cd[u], 0.0);
      EXPECT_LE(m.cd[u], 1.0);
      EXPECT_GE(m.cp[u], p.cp_min - 0.01);
      EXPECT_LE(m.cp[u], p.cp_max + 0.01);
      EXPECT_EQ(PreferenceOf(fed.clients[u].ClassCounts(),
                             PreferenceMode::kMajority),
                spec.users[u].preference_class);
    }
  }
}

TEST(FederationTest, UdTargetIsHit) {
  std::vector<std::size_t> m = PreferenceMultiplicities(10, 3, 0.3);
  std::sort(m.rbegin(), m.rend());
  EXPECT_THAT(m, ElementsAre(5, 3, 2));
  FederationParams p;
  p.n_user = 10;
  p.n_label = 3;
  p.samples_per_user = 60;
  p.cp_min = p.cp_max = 0.6;
  p.cd_min = p.cd_max = 0.3;
  p.ud_target = 0.3;
  FederationSpec spec = MakeFederationSpec(p, 4);
  std::vector<int> prefs;
  for (const auto& u : spec.users) prefs.push_back(u.preference_class);
  EXPECT_DOUBLE_EQ(UserDispersion(prefs, 3), 0.3);
}

TEST(FederationTest, IdTargetIsHit) {
  std::vector<std::size_t> sizes = SizesForImbalance(10, 600, 1000.0);
  const double id = ImbalanceDegree(sizes);
  // Integer spreads quantize the variance.
  EXPECT_NEAR(id, 1000.0, 0.1 * 1000.0);
  EXPECT_THROW(SizesForImbalance(10, 5, 1000.0), ConfigError);
}

TEST(FederationTest, ClientsAreDisjoint) {
  FederationParams p;
  p.n_user = 8;
  p.samples_per_user = 50;
  LabeledDataset pool = MakeSynthetic(10, 2, 200, 3);
  Federation fed = RealizeFederation(pool, MakeFederationSpec(p, 3), 3);
  std::vector<std::size_t> all;
  for (const auto& c : fed.clients) {
    all.insert(all.end(), c.origins().begin(), c.origins().end());
  }
  std::sort(all.begin(), all.end());
  EXPECT_EQ(std::adjacent_find(all.begin(), all.end()), all.end());
  EXPECT_EQ(all, fed.used_origins);
}

TEST(AuxiliaryTest, DisjointFromClientsWithRequestedCounts) {
  FederationParams p;
  p.n_user = 10;
  p.samples_per_user = 100;
  LabeledDataset pool = MakeSynthetic(10, 2, 600, 8);
  Federation fed = RealizeFederation(pool, MakeFederationSpec(p, 8), 8);
  AuxiliaryStore aux = BuildAuxiliary(pool, 150, fed.used_origins, 8);
  ASSERT_EQ(aux.n_label(), 10u);
  for (std::size_t c = 0; c < 10; ++c) {
    EXPECT_EQ(aux.per_class[c].size(), 150u);
    for (int l : aux.per_class[c].labels()) EXPECT_EQ(l, static_cast<int>(c));
  }
  std::vector<std::size_t> both;
  const auto origins = aux.Origins();
  std::set_intersection(origins.begin(), origins.end(),
                        fed.used_origins.begin(), fed.used_origins.end(),
                        std::back_inserter(both));
  EXPECT_TRUE(both.empty());
}

TEST(AuxiliaryTest, ZeroPerClassIsEmptyStore) {
  LabeledDataset pool = MakeSynthetic(3, 2, 10, 1);
  AuxiliaryStore aux = BuildAuxiliary(pool, 0, {}, 1);
  ASSERT_EQ(aux.n_label(), 3u);
  for (const auto& d : aux.per_class) EXPECT_TRUE(d.empty());
}

TEST(AuxiliaryTest, ExcludingWholePoolIsInputError) {
  LabeledDataset pool = MakeSynthetic(3, 2, 10, 1);
  std::vector<std::size_t> all = pool.origins();
  std::sort(all.begin(), all.end());
  EXPECT_THROW(BuildAuxiliary(pool, 1, all, 1), InputError);
}

}  // namespace
}  // namespace ppa::datagen
