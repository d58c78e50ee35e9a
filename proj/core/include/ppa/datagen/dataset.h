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

#ifndef PPA_DATAGEN_DATASET_H_
#define PPA_DATAGEN_DATASET_H_

#include <cstddef>
#include <span>
#include <vector>

#include "ppa/nn/architecture.h"
#include "ppa/nn/engine.h"

namespace ppa::datagen {

// Row-major labelled samples. Every row remembers its `origin`: the row index
// in the root pool it was drawn from, which is what client/auxiliary
// disjointness is checked against.
class LabeledDataset {
 public:
  LabeledDataset() = default;
  LabeledDataset(nn::Shape feature_shape, std::size_t n_label);

  // Throws InputError on a wrong feature count or out-of-range label.
  void Add(std::span<const double> features, int label, std::size_t origin);

  std::size_t size() const { return labels_.size(); }
  bool empty() const { return labels_.empty(); }
  std::size_t dim() const { return dim_; }
  std::size_t n_label() const { return n_label_; }
  const nn::Shape& feature_shape() const { return feature_shape_; }

  std::span<const double> features(std::size_t row) const {
    return std::span<const double>(values_).subspan(row * dim_, dim_);
  }
  int label(std::size_t row) const { return labels_[row]; }
  std::size_t origin(std::size_t row) const { return origins_[row]; }
  const std::vector<int>& labels() const { return labels_; }
  const std::vector<std::size_t>& origins() const { return origins_; }

  std::vector<std::size_t> ClassCounts() const;
  // Row indices grouped by label, ascending within each class.
  std::vector<std::vector<std::size_t>> RowsByClass() const;

  LabeledDataset Subset(std::span<const std::size_t> rows) const;
  void Append(const LabeledDataset& other);

  std::vector<nn::SampleRef> Refs() const;
  std::vector<nn::SampleRef> Refs(std::span<const std::size_t> rows) const;

  friend bool operator==(const LabeledDataset&,
                         const LabeledDataset&) = default;

 private:
  nn::Shape feature_shape_;
  std::size_t dim_ = 0;
  std::size_t n_label_ = 0;
  std::vector<double> values_;
  std::vector<int> labels_;
  std::vector<std::size_t> origins_;
};

}  // namespace ppa::datagen

#endif  // PPA_DATAGEN_DATASET_H_
