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

#include "ppa/nn/architecture.h"

#include <numeric>
#include <sstream>

#include "ppa/common/error.h"

namespace ppa::nn {

std::size_t ShapeSize(const Shape& shape) {
  if (shape.empty()) return 0;
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1},
                         std::multiplies<>());
}

std::string ShapeToString(const Shape& shape) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) os << 'x';
    os << shape[i];
  }
  os << ']';
  return os.str();
}

std::string_view LayerKindName(LayerKind kind) {
  switch (kind) {
    case LayerKind::kDense:
      return "dense";
    case LayerKind::kConv2d:
      return "conv2d";
    case LayerKind::kMaxPool:
      return "maxpool";
    case LayerKind::kRelu:
      return "relu";
    case LayerKind::kDropout:
      return "dropout";
  }
  return "unknown";
}

LayerSpec Dense(std::size_t in, std::size_t out) {
  LayerSpec s;
  s.kind = LayerKind::kDense;
  s.in = in;
  s.out = out;
  return s;
}

LayerSpec Conv2d(std::size_t in_channels, std::size_t out_channels,
                 std::size_t kernel, std::size_t stride) {
  LayerSpec s;
  s.kind = LayerKind::kConv2d;
  s.in_channels = in_channels;
  s.out_channels = out_channels;
  s.kernel = kernel;
  s.stride = stride;
  return s;
}

LayerSpec MaxPool(std::size_t kernel) {
  LayerSpec s;
  s.kind = LayerKind::kMaxPool;
  s.kernel = kernel;
  return s;
}

LayerSpec Relu() { return LayerSpec{}; }

LayerSpec Dropout(double rate) {
  LayerSpec s;
  s.kind = LayerKind::kDropout;
  s.rate = rate;
  return s;
}

Architecture::Architecture(std::vector<LayerSpec> layers, Shape input_shape,
                           std::size_t n_classes)
    : layers_(std::move(layers)),
      input_shape_(std::move(input_shape)),
      n_classes_(n_classes) {
  if (layers_.empty()) throw InputError("architecture has no layers");
  if (ShapeSize(input_shape_) == 0) {
    throw InputError("architecture input shape is empty");
  }
  shapes_.reserve(layers_.size() + 1);
  shapes_.push_back(input_shape_);
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const LayerSpec& l = layers_[i];
    const Shape& in = shapes_.back();
    const std::string where = "layer " + std::to_string(i) + " (" +
                              std::string(LayerKindName(l.kind)) + ")";
    switch (l.kind) {
      case LayerKind::kDense:
        if (l.in == 0 || l.out == 0) {
          throw InputError(where + ": zero width");
        }
        if (ShapeSize(in) != l.in) {
          throw InputError(where + ": expects " + std::to_string(l.in) +
                           " inputs, previous layer produces " +
                           ShapeToString(in));
        }
        shapes_.push_back({l.out});
        break;
      case LayerKind::kConv2d: {
        if (in.size() != 3 || in[0] != l.in_channels) {
          throw InputError(where + ": expects " +
                           std::to_string(l.in_channels) +
                           " input channels, got " + ShapeToString(in));
        }
        if (l.kernel == 0 || l.stride == 0 || l.out_channels == 0) {
          throw InputError(where + ": zero kernel/stride/channels");
        }
        if (in[1] < l.kernel || in[2] < l.kernel) {
          throw InputError(where + ": kernel larger than input " +
                           ShapeToString(in));
        }
        shapes_.push_back({l.out_channels, (in[1] - l.kernel) / l.stride + 1,
                           (in[2] - l.kernel) / l.stride + 1});
        break;
      }
      case LayerKind::kMaxPool:
        if (in.size() != 3 || l.kernel == 0 || in[1] < l.kernel ||
            in[2] < l.kernel) {
          throw InputError(where + ": incompatible with input " +
                           ShapeToString(in));
        }
        shapes_.push_back({in[0], in[1] / l.kernel, in[2] / l.kernel});
        break;
      case LayerKind::kRelu:
        shapes_.push_back(in);
        break;
      case LayerKind::kDropout:
        if (!(l.rate >= 0.0 && l.rate < 1.0)) {
          throw InputError(where + ": rate must lie in [0, 1)");
        }
        shapes_.push_back(in);
        break;
    }
  }
  if (ShapeSize(shapes_.back()) != n_classes_) {
    throw InputError("final layer produces " + ShapeToString(shapes_.back()) +
                     " but n_classes = " + std::to_string(n_classes_));
  }

  std::optional<std::size_t> marked;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    if (!layers_[i].feature_layer) continue;
    if (!layers_[i].HasParams()) {
      throw InputError("feature layer " + std::to_string(i) +
                       " has no parameters");
    }
    if (marked) throw InputError("more than one feature layer marked");
    marked = i;
  }
  if (!marked) {
    std::vector<std::size_t> convs, denses;
    for (std::size_t i = 0; i < layers_.size(); ++i) {
      if (layers_[i].kind == LayerKind::kConv2d) convs.push_back(i);
      if (layers_[i].kind == LayerKind::kDense) denses.push_back(i);
    }
    if (!convs.empty()) {
      marked = convs.back();
    } else if (denses.size() >= 2) {
      marked = denses[denses.size() - 2];
    } else if (!denses.empty()) {
      marked = denses.back();
    } else {
      throw InputError("architecture has no parameterised layer");
    }
    layers_[*marked].feature_layer = true;
  }
  feature_layer_ = *marked;
}

Architecture Architecture::Mlp(std::size_t input_dim,
                               const std::vector<std::size_t>& hidden,
                               std::size_t n_classes, double dropout_rate) {
  std::vector<LayerSpec> layers;
  std::size_t width = input_dim;
  for (std::size_t h : hidden) {
    layers.push_back(Dense(width, h));
    layers.push_back(Relu());
    width = h;
  }
  if (dropout_rate > 0.0 && !hidden.empty()) {
    layers.push_back(Dropout(dropout_rate));
  }
  layers.push_back(Dense(width, n_classes));
  return Architecture(std::move(layers), {input_dim}, n_classes);
}

std::size_t Architecture::WeightCount(std::size_t layer) const {
  const LayerSpec& l = layers_.at(layer);
  switch (l.kind) {
    case LayerKind::kDense:
      return l.in * l.out;
    case LayerKind::kConv2d:
      return l.out_channels * l.in_channels * l.kernel * l.kernel;
    default:
      return 0;
  }
}

std::size_t Architecture::ParamCount(std::size_t layer) const {
  const LayerSpec& l = layers_.at(layer);
  switch (l.kind) {
    case LayerKind::kDense:
      return WeightCount(layer) + l.out;
    case LayerKind::kConv2d:
      return WeightCount(layer) + l.out_channels;
    default:
      return 0;
  }
}

std::pair<std::size_t, std::size_t> Architecture::Fans(
    std::size_t layer) const {
  const LayerSpec& l = layers_.at(layer);
  if (l.kind == LayerKind::kConv2d) {
    const std::size_t area = l.kernel * l.kernel;
    return {l.in_channels * area, l.out_channels * area};
  }
  return {l.in, l.out};
}

nlohmann::json Architecture::ToJson() const {
  nlohmann::json layers = nlohmann::json::array();
  for (const LayerSpec& l : layers_) {
    nlohmann::json j;
    j["type"] = LayerKindName(l.kind);
    switch (l.kind) {
      case LayerKind::kDense:
        j["in"] = l.in;
        j["out"] = l.out;
        break;
      case LayerKind::kConv2d:
        j["in_ch"] = l.in_channels;
        j["out_ch"] = l.out_channels;
        j["kernel"] = l.kernel;
        j["stride"] = l.stride;
        break;
      case LayerKind::kMaxPool:
        j["kernel"] = l.kernel;
        break;
      case LayerKind::kDropout:
        j["rate"] = l.rate;
        break;
      case LayerKind::kRelu:
        break;
    }
    if (l.feature_layer) j["feature_layer"] = true;
    layers.push_back(std::move(j));
  }
  return {{"input_shape", input_shape_},
          {"n_classes", n_classes_},
          {"layers", std::move(layers)}};
}

Architecture Architecture::FromJson(const nlohmann::json& j) {
  try {
    std::vector<LayerSpec> layers;
    for (const auto& lj : j.at("layers")) {
      const std::string type = lj.at("type").get<std::string>();
      LayerSpec l;
      if (type == "dense") {
        l = Dense(lj.at("in").get<std::size_t>(),
                  lj.at("out").get<std::size_t>());
      } else if (type == "conv2d") {
        l = Conv2d(lj.at("in_ch").get<std::size_t>(),
                   lj.at("out_ch").get<std::size_t>(),
                   lj.at("kernel").get<std::size_t>(),
                   lj.value("stride", std::size_t{1}));
      } else if (type == "maxpool") {
        l = MaxPool(lj.at("kernel").get<std::size_t>());
      } else if (type == "relu") {
        l = Relu();
      } else if (type == "dropout") {
        l = Dropout(lj.at("rate").get<double>());
      } else {
        throw InputError("unknown layer type '" + type + "'");
      }
      l.feature_layer = lj.value("feature_layer", false);
      layers.push_back(l);
    }
    return Architecture(std::move(layers),
                        j.at("input_shape").get<Shape>(),
                        j.at("n_classes").get<std::size_t>());
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed architecture descriptor: ") +
                     e.what());
  }
}

}  // namespace ppa::nn
