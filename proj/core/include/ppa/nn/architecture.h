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

#ifndef PPA_NN_ARCHITECTURE_H_
#define PPA_NN_ARCHITECTURE_H_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace ppa::nn {

// Tensor shape without the batch dimension: {dim} for flat inputs,
// {channels, height, width} for images.
using Shape = std::vector<std::size_t>;

std::size_t ShapeSize(const Shape& shape);
std::string ShapeToString(const Shape& shape);

enum class LayerKind { kDense, kConv2d, kMaxPool, kRelu, kDropout };

std::string_view LayerKindName(LayerKind kind);

struct LayerSpec {
  LayerKind kind = LayerKind::kRelu;
  // dense
  std::size_t in = 0;
  std::size_t out = 0;
  // conv2d (valid padding)
  std::size_t in_channels = 0;
  std::size_t out_channels = 0;
  std::size_t kernel = 0;
  std::size_t stride = 1;
  // dropout
  double rate = 0.0;
  // Marks the layer whose parameters feed sensitivity extraction.
  bool feature_layer = false;

  bool HasParams() const {
    return kind == LayerKind::kDense || kind == LayerKind::kConv2d;
  }
  friend bool operator==(const LayerSpec&, const LayerSpec&) = default;
};

LayerSpec Dense(std::size_t in, std::size_t out);
LayerSpec Conv2d(std::size_t in_channels, std::size_t out_channels,
                 std::size_t kernel, std::size_t stride = 1);
LayerSpec MaxPool(std::size_t kernel);
LayerSpec Relu();
LayerSpec Dropout(double rate);

// Validated, shape-inferred network description. Immutable once built.
//
// If no layer carries `feature_layer`, the last convolution is chosen, or for
// convolution-free networks the last dense layer before the output layer
// (the output layer itself when the network has a single dense layer).
class Architecture {
 public:
  // Throws InputError when layers do not chain or the output width differs
  // from n_classes.
  Architecture(std::vector<LayerSpec> layers, Shape input_shape,
               std::size_t n_classes);

  // Plain MLP: input_dim -> hidden... -> n_classes with ReLU between layers.
  // A positive dropout_rate inserts a dropout layer on the last hidden
  // activation.
  static Architecture Mlp(std::size_t input_dim,
                          const std::vector<std::size_t>& hidden,
                          std::size_t n_classes, double dropout_rate = 0.0);

  const std::vector<LayerSpec>& layers() const { return layers_; }
  const Shape& input_shape() const { return input_shape_; }
  std::size_t n_classes() const { return n_classes_; }
  std::size_t feature_layer() const { return feature_layer_; }

  const Shape& InputShapeOf(std::size_t layer) const {
    return shapes_[layer];
  }
  const Shape& OutputShapeOf(std::size_t layer) const {
    return shapes_[layer + 1];
  }
  // Weight count plus bias count; zero for parameter-free layers.
  std::size_t ParamCount(std::size_t layer) const;
  std::size_t WeightCount(std::size_t layer) const;
  // Fan-in / fan-out used for Glorot initialisation.
  std::pair<std::size_t, std::size_t> Fans(std::size_t layer) const;

  nlohmann::json ToJson() const;
  static Architecture FromJson(const nlohmann::json& j);

  friend bool operator==(const Architecture& a, const Architecture& b) {
    return a.layers_ == b.layers_ && a.input_shape_ == b.input_shape_ &&
           a.n_classes_ == b.n_classes_ &&
           a.feature_layer_ == b.feature_layer_;
  }

 private:
  std::vector<LayerSpec> layers_;
  Shape input_shape_;
  std::size_t n_classes_;
  std::size_t feature_layer_ = 0;
  std::vector<Shape> shapes_;  // shapes_[i] is the input of layer i
};

}  // namespace ppa::nn

#endif  // PPA_NN_ARCHITECTURE_H_
