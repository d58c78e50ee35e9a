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

#ifndef PPA_NN_PARAM_VECTOR_H_
#define PPA_NN_PARAM_VECTOR_H_

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "ppa/nn/architecture.h"

namespace ppa::nn {

struct LayerSlice {
  std::size_t layer = 0;   // index into Architecture::layers()
  std::size_t offset = 0;  // first value of the layer in the flat vector
  std::size_t length = 0;  // weights followed by biases
  std::size_t weights = 0;

  friend bool operator==(const LayerSlice&, const LayerSlice&) = default;
};

// Maps every parameterised layer onto a contiguous range of the flat vector.
class ParamLayout {
 public:
  ParamLayout() = default;
  explicit ParamLayout(const Architecture& arch);

  std::size_t total() const { return total_; }
  const std::vector<LayerSlice>& slices() const { return slices_; }
  // Throws InternalError if the layer has no parameters.
  const LayerSlice& SliceOf(std::size_t layer) const;

  friend bool operator==(const ParamLayout&, const ParamLayout&) = default;

 private:
  std::vector<LayerSlice> slices_;
  std::size_t total_ = 0;
};

// Flat real vector plus its layer layout. ParamVector and GradientVector are
// distinct instantiations so the two cannot be mixed up silently.
template <typename Tag>
class LayeredVector {
 public:
  LayeredVector() = default;
  explicit LayeredVector(ParamLayout layout)
      : layout_(std::move(layout)), values_(layout_.total(), 0.0) {}
  LayeredVector(ParamLayout layout, std::vector<double> values);

  const ParamLayout& layout() const { return layout_; }
  std::size_t size() const { return values_.size(); }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }

  std::span<double> LayerValues(std::size_t layer) {
    const LayerSlice& s = layout_.SliceOf(layer);
    return std::span<double>(values_).subspan(s.offset, s.length);
  }
  std::span<const double> LayerValues(std::size_t layer) const {
    const LayerSlice& s = layout_.SliceOf(layer);
    return std::span<const double>(values_).subspan(s.offset, s.length);
  }

  friend bool operator==(const LayeredVector&,
                         const LayeredVector&) = default;

 private:
  ParamLayout layout_;
  std::vector<double> values_;
};

struct ParamTag {};
struct GradientTag {};
using ParamVector = LayeredVector<ParamTag>;
using GradientVector = LayeredVector<GradientTag>;

extern template class LayeredVector<ParamTag>;
extern template class LayeredVector<GradientTag>;

// Throws InternalError naming `what` when the layouts differ.
void RequireSameLayout(const ParamLayout& a, const ParamLayout& b,
                       const char* what);

double L2Norm(std::span<const double> v);

}  // namespace ppa::nn

#endif  // PPA_NN_PARAM_VECTOR_H_
