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

#include "ppa/nn/param_vector.h"

#include <cmath>
#include <string>

#include "ppa/common/error.h"

namespace ppa::nn {

ParamLayout::ParamLayout(const Architecture& arch) {
  for (std::size_t i = 0; i < arch.layers().size(); ++i) {
    const std::size_t n = arch.ParamCount(i);
    if (n == 0) continue;
    slices_.push_back({i, total_, n, arch.WeightCount(i)});
    total_ += n;
  }
}

const LayerSlice& ParamLayout::SliceOf(std::size_t layer) const {
  for (const LayerSlice& s : slices_) {
    if (s.layer == layer) return s;
  }
  throw InternalError("layer " + std::to_string(layer) +
                      " has no parameters in this layout");
}

template <typename Tag>
LayeredVector<Tag>::LayeredVector(ParamLayout layout,
                                  std::vector<double> values)
    : layout_(std::move(layout)), values_(std::move(values)) {
  if (values_.size() != layout_.total()) {
    throw InternalError("value count " + std::to_string(values_.size()) +
                        " does not match layout total " +
                        std::to_string(layout_.total()));
  }
}

template class LayeredVector<ParamTag>;
template class LayeredVector<GradientTag>;

void RequireSameLayout(const ParamLayout& a, const ParamLayout& b,
                       const char* what) {
  if (!(a == b)) throw InternalError(std::string(what) + ": layout mismatch");
}

double L2Norm(std::span<const double> v) {
  double sum = 0.0;
  for (double x : v) sum += x * x;
  return std::sqrt(sum);
}

}  // namespace ppa::nn
