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

#include "ppa/datagen/synthetic.h"

#include <cmath>
#include <numeric>

#include "ppa/common/error.h"
#include "ppa/common/rng.h"

namespace ppa::datagen {
namespace {

double Distance(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

}  // namespace

std::vector<std::vector<double>> SyntheticClassMeans(
    std::size_t n_label, std::size_t dim, std::uint64_t seed,
    const SyntheticOptions& options) {
  if (n_label < 2) throw InputError("synthetic data needs n_label >= 2");
  if (dim < 2) throw InputError("synthetic data needs dim >= 2");
  Rng rng(DeriveSeed(seed, "synthetic-means"));
  std::vector<std::vector<double>> means(n_label,
                                         std::vector<double>(dim, 0.0));
  if (dim >= n_label) {
    std::vector<std::size_t> axes(dim);
    std::iota(axes.begin(), axes.end(), std::size_t{0});
    rng.Shuffle(std::span<std::size_t>(axes));
    const double scale = options.min_mean_distance / std::sqrt(2.0);
    for (std::size_t c = 0; c < n_label; ++c) means[c][axes[c]] = scale;
    return means;
  }
  double radius = options.min_mean_distance;
  for (int attempt = 0;; ++attempt) {
    if (attempt > 0 && attempt % 200 == 0) radius *= 1.1;
    for (auto& m : means) {
      double norm = 0.0;
      for (double& x : m) {
        x = rng.Normal();
        norm += x * x;
      }
      norm = std::sqrt(norm);
      for (double& x : m) x *= radius / norm;
    }
    bool ok = true;
    for (std::size_t a = 0; a < n_label && ok; ++a) {
      for (std::size_t b = a + 1; b < n_label && ok; ++b) {
        ok = Distance(means[a], means[b]) >= options.min_mean_distance;
      }
    }
    if (ok) return means;
  }
}

LabeledDataset SampleBlobs(const std::vector<std::vector<double>>& means,
                           std::size_t per_class, double sigma,
                           std::uint64_t seed, std::size_t origin_offset) {
  if (means.size() < 2) throw InputError("need at least two class means");
  if (sigma < 0.0) throw InputError("sigma must be >= 0");
  const std::size_t dim = means.front().size();
  LabeledDataset out({dim}, means.size());
  Rng rng(seed);
  std::vector<double> x(dim);
  std::size_t row = origin_offset;
  for (std::size_t c = 0; c < means.size(); ++c) {
    if (means[c].size() != dim) throw InputError("class means differ in length");
    for (std::size_t i = 0; i < per_class; ++i) {
      for (std::size_t d = 0; d < dim; ++d) {
        x[d] = means[c][d] + sigma * rng.Normal();
      }
      out.Add(x, static_cast<int>(c), row++);
    }
  }
  return out;
}

LabeledDataset MakeSynthetic(std::size_t n_label, std::size_t dim,
                             std::size_t per_class_pool, std::uint64_t seed,
                             const SyntheticOptions& options) {
  if (options.sigma < 0.0) throw InputError("sigma must be >= 0");
  const auto means = SyntheticClassMeans(n_label, dim, seed, options);
  return SampleBlobs(means, per_class_pool, options.sigma,
                     DeriveSeed(seed, "synthetic-samples"), 0);
}

}  // namespace ppa::datagen
