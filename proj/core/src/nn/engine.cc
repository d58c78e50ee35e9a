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

#include "ppa/nn/engine.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ppa/common/error.h"

namespace ppa::nn {
namespace {

void ValidateBatch(const Architecture& arch, Batch batch) {
  if (batch.empty()) throw InputError("empty batch");
  const std::size_t dim = ShapeSize(arch.input_shape());
  for (std::size_t i = 0; i < batch.size(); ++i) {
    if (batch[i].features.size() != dim) {
      throw InputError("sample " + std::to_string(i) + " has " +
                       std::to_string(batch[i].features.size()) +
                       " features, architecture expects " +
                       ShapeToString(arch.input_shape()));
    }
    if (batch[i].label < 0 ||
        static_cast<std::size_t>(batch[i].label) >= arch.n_classes()) {
      throw InputError("sample " + std::to_string(i) + " has label " +
                       std::to_string(batch[i].label) + " outside [0, " +
                       std::to_string(arch.n_classes()) + ")");
    }
  }
}

// Per-sample scratch space: activations entering each layer plus whatever
// the backward pass needs (pool argmax, dropout masks).
class Workspace {
 public:
  Workspace(const ParamVector& model, const Architecture& arch)
      : model_(model), arch_(arch) {
    const std::size_t n = arch.layers().size();
    acts_.resize(n + 1);
    aux_.resize(n);
    for (std::size_t i = 0; i <= n; ++i) {
      acts_[i].resize(ShapeSize(i < n ? arch.InputShapeOf(i)
                                      : arch.OutputShapeOf(n - 1)));
    }
  }

  // Returns the logits of the last Run.
  std::span<const double> Run(std::span<const double> x, Rng* dropout_rng) {
    std::copy(x.begin(), x.end(), acts_[0].begin());
    const auto& layers = arch_.layers();
    for (std::size_t i = 0; i < layers.size(); ++i) {
      LayerForward(i, dropout_rng);
    }
    return acts_.back();
  }

  // Accumulates d(loss)/d(params) into grad given d(loss)/d(logits).
  void Backprop(std::span<const double> dlogits, GradientVector& grad) {
    const auto& layers = arch_.layers();
    std::vector<double> delta(dlogits.begin(), dlogits.end());
    std::vector<double> next;
    for (std::size_t i = layers.size(); i-- > 0;) {
      next.assign(acts_[i].size(), 0.0);
      LayerBackward(i, delta, next, grad, /*need_input_grad=*/i > 0);
      delta.swap(next);
    }
  }

 private:
  void LayerForward(std::size_t i, Rng* dropout_rng) {
    const LayerSpec& l = arch_.layers()[i];
    const std::vector<double>& in = acts_[i];
    std::vector<double>& out = acts_[i + 1];
    switch (l.kind) {
      case LayerKind::kDense: {
        auto p = model_.LayerValues(i);
        const double* w = p.data();
        const double* b = p.data() + l.in * l.out;
        for (std::size_t o = 0; o < l.out; ++o) {
          double s = b[o];
          const double* row = w + o * l.in;
          for (std::size_t k = 0; k < l.in; ++k) s += row[k] * in[k];
          out[o] = s;
        }
        break;
      }
      case LayerKind::kConv2d: {
        const Shape& is = arch_.InputShapeOf(i);
        const Shape& os = arch_.OutputShapeOf(i);
        auto p = model_.LayerValues(i);
        const double* w = p.data();
        const double* b = p.data() + arch_.WeightCount(i);
        const std::size_t k = l.kernel;
        for (std::size_t oc = 0; oc < os[0]; ++oc) {
          for (std::size_t oy = 0; oy < os[1]; ++oy) {
            for (std::size_t ox = 0; ox < os[2]; ++ox) {
              double s = b[oc];
              for (std::size_t c = 0; c < is[0]; ++c) {
                const double* wk = w + (oc * is[0] + c) * k * k;
                for (std::size_t ky = 0; ky < k; ++ky) {
                  const double* row =
                      in.data() + (c * is[1] + oy * l.stride + ky) * is[2] +
                      ox * l.stride;
                  for (std::size_t kx = 0; kx < k; ++kx) {
                    s += wk[ky * k + kx] * row[kx];
                  }
                }
              }
              out[(oc * os[1] + oy) * os[2] + ox] = s;
            }
          }
        }
        break;
      }
      case LayerKind::kMaxPool: {
        const Shape& is = arch_.InputShapeOf(i);
        const Shape& os = arch_.OutputShapeOf(i);
        std::vector<double>& arg = aux_[i];
        arg.resize(out.size());
        for (std::size_t c = 0; c < os[0]; ++c) {
          for (std::size_t oy = 0; oy < os[1]; ++oy) {
            for (std::size_t ox = 0; ox < os[2]; ++ox) {
              double best = -std::numeric_limits<double>::infinity();
              std::size_t best_idx = 0;
              for (std::size_t ky = 0; ky < l.kernel; ++ky) {
                for (std::size_t kx = 0; kx < l.kernel; ++kx) {
                  const std::size_t idx =
                      (c * is[1] + oy * l.kernel + ky) * is[2] +
                      ox * l.kernel + kx;
                  if (in[idx] > best) {
                    best = in[idx];
                    best_idx = idx;
                  }
                }
              }
              const std::size_t o = (c * os[1] + oy) * os[2] + ox;
              out[o] = best;
              arg[o] = static_cast<double>(best_idx);
            }
          }
        }
        break;
      }
      case LayerKind::kRelu:
        for (std::size_t k = 0; k < in.size(); ++k) {
          out[k] = in[k] > 0.0 ? in[k] : 0.0;
        }
        break;
      case LayerKind::kDropout: {
        std::vector<double>& mask = aux_[i];
        mask.assign(in.size(), 1.0);
        if (dropout_rng != nullptr && l.rate > 0.0) {
          const double keep_scale = 1.0 / (1.0 - l.rate);
          for (double& m : mask) {
            m = dropout_rng->Uniform() < l.rate ? 0.0 : keep_scale;
          }
        }
        for (std::size_t k = 0; k < in.size(); ++k) out[k] = in[k] * mask[k];
        break;
      }
    }
  }

  void LayerBackward(std::size_t i, const std::vector<double>& dout,
                     std::vector<double>& din, GradientVector& grad,
                     bool need_input_grad) {
    const LayerSpec& l = arch_.layers()[i];
    const std::vector<double>& in = acts_[i];
    switch (l.kind) {
      case LayerKind::kDense: {
        auto p = model_.LayerValues(i);
        auto g = grad.LayerValues(i);
        const double* w = p.data();
        double* gw = g.data();
        double* gb = g.data() + l.in * l.out;
        for (std::size_t o = 0; o < l.out; ++o) {
          const double d = dout[o];
          if (d == 0.0) continue;
          gb[o] += d;
          double* grow = gw + o * l.in;
          const double* row = w + o * l.in;
          for (std::size_t k = 0; k < l.in; ++k) grow[k] += d * in[k];
          if (need_input_grad) {
            for (std::size_t k = 0; k < l.in; ++k) din[k] += d * row[k];
          }
        }
        break;
      }
      case LayerKind::kConv2d: {
        const Shape& is = arch_.InputShapeOf(i);
        const Shape& os = arch_.OutputShapeOf(i);
        auto p = model_.LayerValues(i);
        auto g = grad.LayerValues(i);
        const double* w = p.data();
        double* gw = g.data();
        double* gb = g.data() + arch_.WeightCount(i);
        const std::size_t k = l.kernel;
        for (std::size_t oc = 0; oc < os[0]; ++oc) {
          for (std::size_t oy = 0; oy < os[1]; ++oy) {
            for (std::size_t ox = 0; ox < os[2]; ++ox) {
              const double d = dout[(oc * os[1] + oy) * os[2] + ox];
              if (d == 0.0) continue;
              gb[oc] += d;
              for (std::size_t c = 0; c < is[0]; ++c) {
                const std::size_t wbase = (oc * is[0] + c) * k * k;
                for (std::size_t ky = 0; ky < k; ++ky) {
                  const std::size_t rbase =
                      (c * is[1] + oy * l.stride + ky) * is[2] +
                      ox * l.stride;
                  for (std::size_t kx = 0; kx < k; ++kx) {
                    gw[wbase + ky * k + kx] += d * in[rbase + kx];
                    if (need_input_grad) {
                      din[rbase + kx] += d * w[wbase + ky * k + kx];
                    }
                  }
                }
              }
            }
          }
        }
        break;
      }
      case LayerKind::kMaxPool: {
        const std::vector<double>& arg = aux_[i];
        for (std::size_t o = 0; o < dout.size(); ++o) {
          din[static_cast<std::size_t>(arg[o])] += dout[o];
        }
        break;
      }
      case LayerKind::kRelu:
        for (std::size_t k = 0; k < in.size(); ++k) {
          din[k] = in[k] > 0.0 ? dout[k] : 0.0;
        }
        break;
      case LayerKind::kDropout: {
        const std::vector<double>& mask = aux_[i];
        for (std::size_t k = 0; k < in.size(); ++k) din[k] = dout[k] * mask[k];
        break;
      }
    }
  }

  const ParamVector& model_;
  const Architecture& arch_;
  std::vector<std::vector<double>> acts_;
  std::vector<std::vector<double>> aux_;
};

void RequireModelMatches(const ParamVector& model, const Architecture& arch) {
  if (!(model.layout() == ParamLayout(arch))) {
    throw InputError("parameter vector does not match the architecture");
  }
}

// log-sum-exp softmax cross-entropy; writes the probabilities into `probs`.
double CrossEntropy(std::span<const double> logits, int label,
                    std::vector<double>& probs) {
  const double mx = *std::max_element(logits.begin(), logits.end());
  double z = 0.0;
  probs.resize(logits.size());
  for (std::size_t k = 0; k < logits.size(); ++k) {
    probs[k] = std::exp(logits[k] - mx);
    z += probs[k];
  }
  for (double& p : probs) p /= z;
  return (mx + std::log(z)) - logits[static_cast<std::size_t>(label)];
}

}  // namespace

ForwardResult Forward(const ParamVector& model, const Architecture& arch,
                      Batch batch) {
  ValidateBatch(arch, batch);
  RequireModelMatches(model, arch);
  Workspace ws(model, arch);
  ForwardResult result;
  result.logits.reserve(batch.size());
  std::vector<double> probs;
  double total = 0.0;
  for (const SampleRef& s : batch) {
    auto logits = ws.Run(s.features, nullptr);
    total += CrossEntropy(logits, s.label, probs);
    result.logits.emplace_back(logits.begin(), logits.end());
  }
  result.mean_loss = total / static_cast<double>(batch.size());
  return result;
}

LossAndGradient ForwardBackward(const ParamVector& model,
                                const Architecture& arch, Batch batch,
                                Rng* dropout_rng) {
  ValidateBatch(arch, batch);
  RequireModelMatches(model, arch);
  Workspace ws(model, arch);
  LossAndGradient result{0.0, GradientVector(model.layout())};
  const double scale = 1.0 / static_cast<double>(batch.size());
  std::vector<double> probs;
  double total = 0.0;
  for (const SampleRef& s : batch) {
    auto logits = ws.Run(s.features, dropout_rng);
    total += CrossEntropy(logits, s.label, probs);
    probs[static_cast<std::size_t>(s.label)] -= 1.0;
    for (double& p : probs) p *= scale;
    ws.Backprop(probs, result.gradient);
  }
  result.mean_loss = total * scale;
  return result;
}

GradientVector Backward(const ParamVector& model, const Architecture& arch,
                        Batch batch) {
  return ForwardBackward(model, arch, batch, nullptr).gradient;
}

ParamVector SgdStep(const ParamVector& model, const GradientVector& grad,
                    double lr) {
  RequireSameLayout(model.layout(), grad.layout(), "SgdStep");
  ParamVector next = model;
  auto v = next.values();
  auto g = grad.values();
  for (std::size_t i = 0; i < v.size(); ++i) v[i] -= lr * g[i];
  return next;
}

ParamVector InitParams(const Architecture& arch, std::uint64_t seed) {
  ParamVector params{ParamLayout(arch)};
  for (const LayerSlice& s : params.layout().slices()) {
    Rng rng(DeriveSeed(seed, "init", s.layer));
    const auto [fan_in, fan_out] = arch.Fans(s.layer);
    const double limit =
        std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    auto v = params.LayerValues(s.layer);
    for (std::size_t k = 0; k < s.weights; ++k) v[k] = rng.Uniform(-limit, limit);
  }
  return params;
}

std::vector<double> Softmax(std::span<const double> logits) {
  std::vector<double> probs;
  CrossEntropy(logits, 0, probs);
  return probs;
}

std::vector<int> Predict(const ParamVector& model, const Architecture& arch,
                         Batch batch) {
  std::vector<int> out;
  if (batch.empty()) return out;
  ForwardResult fr = Forward(model, arch, batch);
  out.reserve(batch.size());
  for (const auto& row : fr.logits) {
    out.push_back(static_cast<int>(
        std::max_element(row.begin(), row.end()) - row.begin()));
  }
  return out;
}

double Accuracy(const ParamVector& model, const Architecture& arch,
                Batch batch) {
  if (batch.empty()) return 0.0;
  std::vector<int> pred = Predict(model, arch, batch);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    if (pred[i] == batch[i].label) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(batch.size());
}

}  // namespace ppa::nn
