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

#include "ppa/datagen/dataset.h"

#include <string>

#include "ppa/common/error.h"

namespace ppa::datagen {

LabeledDataset::LabeledDataset(nn::Shape feature_shape, std::size_t n_label)
    : feature_shape_(std::move(feature_shape)),
      dim_(nn::ShapeSize(feature_shape_)),
      n_label_(n_label) {}

void LabeledDataset::Add(std::span<const double> features, int label,
                         std::size_t origin) {
  if (features.size() != dim_) {
    throw InputError("sample has " + std::to_string(features.size()) +
                     " features, dataset expects " + std::to_string(dim_));
  }
  if (label < 0 || static_cast<std::size_t>(label) >= n_label_) {
    throw InputError("label " + std::to_string(label) + " outside [0, " +
                     std::to_string(n_label_) + ")");
  }
  values_.insert(values_.end(), features.begin(), features.end());
  labels_.push_back(label);
  origins_.push_back(origin);
}

std::vector<std::size_t> LabeledDataset::ClassCounts() const {
  std::vector<std::size_t> counts(n_label_, 0);
  for (int l : labels_) ++counts[static_cast<std::size_t>(l)];
  return counts;
}

std::vector<std::vector<std::size_t>> LabeledDataset::RowsByClass() const {
  std::vector<std::vector<std::size_t>> rows(n_label_);
  for (std::size_t r = 0; r < labels_.size(); ++r) {
    rows[static_cast<std::size_t>(labels_[r])].push_back(r);
  }
  return rows;
}

LabeledDataset LabeledDataset::Subset(
    std::span<const std::size_t> rows) const {
  LabeledDataset out(feature_shape_, n_label_);
  out.values_.reserve(rows.size() * dim_);
  out.labels_.reserve(rows.size());
  out.origins_.reserve(rows.size());
  for (std::size_t r : rows) {
    if (r >= size()) throw InputError("subset row out of range");
    out.Add(features(r), labels_[r], origins_[r]);
  }
  return out;
}

void LabeledDataset::Append(const LabeledDataset& other) {
  if (other.feature_shape_ != feature_shape_ || other.n_label_ != n_label_) {
    throw InputError("cannot append datasets of different shape");
  }
  values_.insert(values_.end(), other.values_.begin(), other.values_.end());
  labels_.insert(labels_.end(), other.labels_.begin(), other.labels_.end());
  origins_.insert(origins_.end(), other.origins_.begin(),
                  other.origins_.end());
}

std::vector<nn::SampleRef> LabeledDataset::Refs() const {
  std::vector<nn::SampleRef> refs;
  refs.reserve(size());
  for (std::size_t r = 0; r < size(); ++r) refs.push_back({features(r), labels_[r]});
  return refs;
}

std::vector<nn::SampleRef> LabeledDataset::Refs(
    std::span<const std::size_t> rows) const {
  std::vector<nn::SampleRef> refs;
  refs.reserve(rows.size());
  for (std::size_t r : rows) refs.push_back({features(r), labels_[r]});
  return refs;
}

}  // namespace ppa::datagen
