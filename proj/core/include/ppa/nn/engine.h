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

#ifndef PPA_NN_ENGINE_H_
#define PPA_NN_ENGINE_H_

#include <cstdint>
#include <span>
#include <vector>

#include "ppa/common/rng.h"
#include "ppa/nn/architecture.h"
#include "ppa/nn/param_vector.h"

namespace ppa::nn {

// Non-owning view of one labelled sample.
struct SampleRef {
  std::span<const double> features;
  int label = 0;
};
using Batch = std::span<const SampleRef>;

struct ForwardResult {
  std::vector<std::vector<double>> logits;  // one row per sample
  double mean_loss = 0.0;                   // softmax cross-entropy
};

struct LossAndGradient {
  double mean_loss = 0.0;
  GradientVector gradient;
};

// Evaluation-mode forward pass (dropout is the identity).
// Throws InputError on an empty batch, a wrong feature count or a label
// outside [0, n_classes).
ForwardResult Forward(const ParamVector& model, const Architecture& arch,
                      Batch batch);

// Gradient of the mean batch loss, evaluation mode.
GradientVector Backward(const ParamVector& model, const Architecture& arch,
                        Batch batch);

// Forward and backward in one sweep. With a non-null `dropout_rng`, dropout
// layers sample inverted-dropout masks from it; otherwise they pass through.
LossAndGradient ForwardBackward(const ParamVector& model,
                                const Architecture& arch, Batch batch,
                                Rng* dropout_rng = nullptr);

// values - lr * grad. Throws InternalError on a layout mismatch.
ParamVector SgdStep(const ParamVector& model, const GradientVector& grad,
                    double lr);

// Glorot-uniform weights, zero biases.
ParamVector InitParams(const Architecture& arch, std::uint64_t seed);

std::vector<double> Softmax(std::span<const double> logits);
std::vector<int> Predict(const ParamVector& model, const Architecture& arch,
                         Batch batch);
// Fraction of correctly classified samples; 0 for an empty batch.
double Accuracy(const ParamVector& model, const Architecture& arch,
                Batch batch);

}  // namespace ppa::nn

#endif  // PPA_NN_ENGINE_H_
