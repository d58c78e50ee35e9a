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

#include "ppa/attack/meta.h"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <string>

#include "ppa/common/error.h"
#include "ppa/fedsim/fedavg.h"
#include "ppa/nn/checkpoint.h"
#include "ppa/nn/engine.h"

namespace ppa::attack {

namespace {

std::vector<double> Proportions(const datagen::LabeledDataset& d) {
  const auto counts = d.ClassCounts();
  std::vector<double> p(counts.size(), 0.0);
  if (d.empty()) return p;
  for (std::size_t c = 0; c < counts.size(); ++c) {
    p[c] = static_cast<double>(counts[c]) / static_cast<double>(d.size());
  }
  return p;
}

// Splits `copies` label copies over the classes by largest remainder.
std::vector<std::size_t> Apportion(std::span<const double> p,
                                   std::size_t copies) {
  std::vector<std::size_t> n(p.size(), 0);
  std::vector<std::pair<double, std::size_t>> rem;
  std::size_t used = 0;
  for (std::size_t c = 0; c < p.size(); ++c) {
    const double exact = p[c] * static_cast<double>(copies);
    n[c] = static_cast<std::size_t>(exact);
    used += n[c];
    rem.emplace_back(exact - static_cast<double>(n[c]), c);
  }
  std::stable_sort(rem.begin(), rem.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t i = 0; used < copies && i < rem.size(); ++i, ++used) {
    ++n[rem[i].second];
  }
  return n;
}

}  // namespace

std::vector<MetaSample> BuildMetaDatasetCentralized(
    std::span<const ShadowRecord> shadows) {
  if (shadows.empty()) throw ConfigError("no shadow models");
  std::vector<MetaSample> out;
  out.reserve(shadows.size());
  for (const ShadowRecord& s : shadows) {
    out.push_back({s.sensitivity, s.preference, Proportions(s.dataset)});
  }
  return out;
}

std::size_t SelectShadowPartner(std::size_t i,
                                std::span<const ShadowRecord> shadows,
                                datagen::PreferenceMode mode) {
  if (shadows.size() < 2) {
    throw ConfigError("shadow pairing needs at least two shadows");
  }
  const auto c = static_cast<std::size_t>(shadows[i].preference);
  const bool majority = mode == datagen::PreferenceMode::kMajority;
  std::size_t best = i;
  for (std::size_t j = 0; j < shadows.size(); ++j) {
    if (j == i) continue;
    if (best == i) {
      best = j;
      continue;
    }
    const double v = shadows[j].sensitivity[c];
    const double b = shadows[best].sensitivity[c];
    if (majority ? v > b : v < b) best = j;
  }
  return best;
}

std::vector<MetaSample> BuildMetaDatasetFederated(
    std::span<const ShadowRecord> shadows, const nn::Architecture& arch,
    const datagen::AuxiliaryStore& aux, double alpha,
    const nn::TrainConfig& retrain, datagen::PreferenceMode mode) {
  if (shadows.size() < 2) {
    throw ConfigError("federated meta data needs at least two shadows");
  }
  std::vector<MetaSample> out;
  out.reserve(shadows.size());
  for (std::size_t i = 0; i < shadows.size(); ++i) {
    const std::size_t j = SelectShadowPartner(i, shadows, mode);
    const nn::ParamVector pair[] = {shadows[i].params, shadows[j].params};
    const nn::ParamVector agg = fedsim::MeanModel(pair);
    const SensitivityVector s1 = ExtractSensitivity(agg, arch, aux, alpha);
    nn::TrainConfig tc = retrain;
    tc.epochs = 1;
    tc.seed = DeriveSeed(retrain.seed, "shadow-update", i);
    tc.batch_size = std::min(tc.batch_size, shadows[i].dataset.size());
    const nn::ParamVector updated =
        nn::Train(agg, arch, shadows[i].dataset, tc);
    const SensitivityVector s2 = ExtractSensitivity(updated, arch, aux, alpha);
    out.push_back({DifferentialSensitivity(s1, s2), shadows[i].preference,
                   Proportions(shadows[i].dataset)});
  }
  return out;
}

std::vector<double> NormalizeFeatures(std::span<const double> features) {
  std::vector<double> out(features.begin(), features.end());
  double m = 0.0;
  for (double v : out) m = std::max(m, v);
  if (m > 0.0) {
    for (double& v : out) v /= m;
  }
  return out;
}

MetaClassifier::MetaClassifier(nn::Architecture arch, nn::ParamVector params,
                               double train_accuracy)
    : arch_(std::move(arch)),
      params_(std::move(params)),
      train_accuracy_(train_accuracy) {
  if (arch_.input_shape() != nn::Shape{arch_.n_classes()}) {
    throw InputError("meta-classifier input width must equal n_label");
  }
}

std::vector<double> MetaClassifier::Scores(
    std::span<const double> features) const {
  if (features.size() != n_label()) {
    throw InputError("meta features have length " +
                     std::to_string(features.size()) + ", expected " +
                     std::to_string(n_label()));
  }
  const std::vector<double> x = NormalizeFeatures(features);
  const nn::SampleRef ref{x, 0};
  const nn::ForwardResult r = nn::Forward(params_, arch_, nn::Batch(&ref, 1));
  return nn::Softmax(r.logits.front());
}

int MetaClassifier::Predict(std::span<const double> features) const {
  return Ranking(features).front();
}

std::vector<int> MetaClassifier::Ranking(
    std::span<const double> features) const {
  const std::vector<double> s = Scores(features);
  std::vector<int> order(s.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return s[static_cast<std::size_t>(a)] > s[static_cast<std::size_t>(b)];
  });
  return order;
}

void MetaClassifier::Save(const std::filesystem::path& path) const {
  nn::SaveCheckpoint(path, arch_, params_);
}

MetaClassifier MetaClassifier::Load(const std::filesystem::path& path) {
  nn::Checkpoint ck = nn::LoadCheckpoint(path);
  return MetaClassifier(std::move(ck.arch), std::move(ck.params));
}

MetaClassifier TrainMeta(std::span<const MetaSample> samples,
                         std::size_t n_label, const MetaTrainConfig& cfg) {
  if (samples.size() < n_label) {
    throw ConfigError("meta training needs at least " +
                      std::to_string(n_label) + " samples, got " +
                      std::to_string(samples.size()));
  }
  std::set<int> labels;
  // `hard` holds one row per sample for the reported accuracy; `data` is
  // what the optimiser sees.
  datagen::LabeledDataset hard(nn::Shape{n_label}, n_label);
  datagen::LabeledDataset data(nn::Shape{n_label}, n_label);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples[i].features.size() != n_label) {
      throw InputError("meta sample " + std::to_string(i) +
                       " has the wrong feature length");
    }
    const std::vector<double> x = NormalizeFeatures(samples[i].features);
    hard.Add(x, samples[i].label, i);
    labels.insert(samples[i].label);
    if (samples[i].target.empty() || cfg.target_resolution == 0) {
      data.Add(x, samples[i].label, i);
      continue;
    }
    if (samples[i].target.size() != n_label) {
      throw InputError("meta sample " + std::to_string(i) +
                       " has the wrong target length");
    }
    const auto copies = Apportion(samples[i].target, cfg.target_resolution);
    for (std::size_t c = 0; c < n_label; ++c) {
      for (std::size_t k = 0; k < copies[c]; ++k) {
        data.Add(x, static_cast<int>(c), i);
      }
    }
  }
  if (cfg.require_full_coverage && labels.size() != n_label) {
    for (std::size_t c = 0; c < n_label; ++c) {
      if (!labels.contains(static_cast<int>(c))) {
        throw ConfigError("meta data has no sample of class " +
                          std::to_string(c));
      }
    }
  }

  nn::Architecture arch(
      {nn::Dense(n_label, cfg.hidden), nn::Relu(),
       nn::Dense(cfg.hidden, n_label)},
      nn::Shape{n_label}, n_label);
  nn::ParamVector params = nn::InitParams(arch, DeriveSeed(cfg.seed, "meta-init"));

  if (labels.size() == 1) {
    // Constant classifier: the output layer ignores its input.
    auto out = params.LayerValues(2);
    std::fill(out.begin(), out.end(), 0.0);
    out[n_label * cfg.hidden + static_cast<std::size_t>(*labels.begin())] = 1.0;
    return MetaClassifier(std::move(arch), std::move(params), 1.0);
  }

  nn::TrainConfig tc;
  tc.learning_rate = cfg.learning_rate;
  tc.epochs = cfg.epochs;
  tc.batch_size = std::min(cfg.batch_size, data.size());
  tc.seed = DeriveSeed(cfg.seed, "meta-train");
  params = nn::Train(params, arch, data, tc);
  const double acc = nn::Accuracy(params, arch, hard.Refs());
  return MetaClassifier(std::move(arch), std::move(params), acc);
}

void WriteMetaCsv(const std::filesystem::path& path,
                  std::span<const MetaSample> samples) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  const std::size_t n = samples.empty() ? 0 : samples.front().features.size();
  for (std::size_t c = 0; c < n; ++c) out << 'f' << c << ',';
  out << "label\n";
  out.precision(17);
  for (const MetaSample& s : samples) {
    for (double v : s.features) out << v << ',';
    out << s.label << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

std::vector<MetaSample> ReadMetaCsv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw FormatError(path.string() + ": empty file");
  const auto n_cols =
      static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1;
  std::vector<MetaSample> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != n_cols) {
      throw FormatError(path.string() + ":" + std::to_string(line_no) +
                        ": expected " + std::to_string(n_cols) + " columns");
    }
    MetaSample s;
    try {
      for (std::size_t c = 0; c + 1 < n_cols; ++c) {
        s.features.push_back(std::stod(cells[c]));
      }
      s.label = std::stoi(cells.back());
    } catch (const std::exception&) {
      throw FormatError(path.string() + ":" + std::to_string(line_no) +
                        ": not a number");
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace ppa::attack
