// Copyright 2026 The qfnn Authors.
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

// Dense feed-forward networks with hand-written reverse mode.
//
// A layer computes y = act(W^T x + b) with W stored fan_in x fan_out, i.e.
// the row-vector form y = act(x^T W + b).

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qfnn/error.hpp"
#include "qfnn/qubo.hpp"
#include "qfnn/rng.hpp"

namespace qfnn {

enum class Activation { kRelu, kTanh, kSigmoid, kIdentity };

inline std::string_view to_string(Activation a) {
  switch (a) {
    case Activation::kRelu: return "relu";
    case Activation::kTanh: return "tanh";
    case Activation::kSigmoid: return "sigmoid";
    case Activation::kIdentity: return "identity";
  }
  return "identity";
}

inline std::optional<Activation> parse_activation(std::string_view s) {
  if (s == "relu") return Activation::kRelu;
  if (s == "tanh") return Activation::kTanh;
  if (s == "sigmoid") return Activation::kSigmoid;
  if (s == "identity") return Activation::kIdentity;
  return std::nullopt;
}

/// Affine map applied after the last activation.
enum class OutputMap {
  kNone,
  kUnitInterval,  // y -> (y + 1) / 2, takes tanh output onto [0,1]
};

struct DenseLayer {
  Matrix W;  // fan_in x fan_out
  Vector b;  // fan_out
  Activation activation = Activation::kRelu;

  DenseLayer() = default;
  DenseLayer(int fan_in, int fan_out, Activation act)
      : W(Matrix::Zero(fan_in, fan_out)), b(Vector::Zero(fan_out)), activation(act) {}

  int fan_in() const { return static_cast<int>(W.rows()); }
  int fan_out() const { return static_cast<int>(W.cols()); }
  Eigen::Index parameter_count() const { return W.size() + b.size(); }
};

/// Ordered stack of dense layers plus the output map.
struct Mlp {
  std::vector<DenseLayer> layers;
  OutputMap output_map = OutputMap::kNone;

  int input_width() const { return layers.empty() ? 0 : layers.front().fan_in(); }
  int output_width() const { return layers.empty() ? 0 : layers.back().fan_out(); }
};

/// Per-layer activations recorded by forward(); backward() needs it.
struct ForwardCache {
  std::vector<Vector> inputs;   // input to layer l
  std::vector<Vector> outputs;  // act(z_l)
  std::vector<Vector> pre;      // z_l

  bool empty() const { return inputs.empty(); }
};

struct MlpGradients {
  std::vector<Matrix> dW;
  std::vector<Vector> db;
  Vector d_input;

  bool all_finite() const {
    for (const auto& m : dW)
      if (!m.allFinite()) return false;
    for (const auto& v : db)
      if (!v.allFinite()) return false;
    return d_input.allFinite();
  }
};

namespace detail {

inline Vector activate(Activation a, const Vector& z) {
  switch (a) {
    case Activation::kRelu: return z.cwiseMax(0.0);
    case Activation::kTanh: return z.array().tanh().matrix();
    case Activation::kSigmoid:
      return z.unaryExpr([](double v) {
        // Split on sign so that exp never overflows.
        if (v >= 0.0) return 1.0 / (1.0 + std::exp(-v));
        const double e = std::exp(v);
        return e / (1.0 + e);
      });
    case Activation::kIdentity: return z;
  }
  return z;
}

// d act / d z expressed through z and y = act(z). ReLU'(0) = 0.
inline Vector activation_slope(Activation a, const Vector& z, const Vector& y) {
  switch (a) {
    case Activation::kRelu: return z.unaryExpr([](double v) { return v > 0.0 ? 1.0 : 0.0; });
    case Activation::kTanh: return (1.0 - y.array().square()).matrix();
    case Activation::kSigmoid: return (y.array() * (1.0 - y.array())).matrix();
    case Activation::kIdentity: return Vector::Ones(z.size());
  }
  return Vector::Ones(z.size());
}

}  // namespace detail

inline Vector forward(const Mlp& net, const Vector& input, ForwardCache* cache = nullptr) {
  detail::require(!net.layers.empty(), ErrorKind::kInvalidArgument, "network has no layers");
  detail::require(input.size() == net.input_width(), ErrorKind::kDimensionMismatch, [&] { return std::string("network input width ") + std::to_string(net.input_width()) + " does not match input of length " + std::to_string(input.size()); });
  if (cache) {
    cache->inputs.clear();
    cache->outputs.clear();
    cache->pre.clear();
  }
  Vector a = input;
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    const auto& layer = net.layers[l];
    detail::require(layer.fan_in() == a.size(), ErrorKind::kDimensionMismatch, [&] { return std::string("layer ") + std::to_string(l) + " expects width " + std::to_string(layer.fan_in()) + ", got " + std::to_string(a.size()); });
    Vector z = layer.W.transpose() * a + layer.b;
    if (!z.allFinite())
      throw Error(ErrorKind::kNonFinite,
                  "non-finite pre-activation in layer " + std::to_string(l));
    Vector y = detail::activate(layer.activation, z);
    if (cache) {
      cache->inputs.push_back(std::move(a));
      cache->pre.push_back(std::move(z));
      cache->outputs.push_back(y);
    }
    a = std::move(y);
  }
  if (net.output_map == OutputMap::kUnitInterval) a = ((a.array() + 1.0) * 0.5).matrix();
  return a;
}

/// Reverse-mode pass; `upstream` is d loss / d output (after the output map).
inline MlpGradients backward(const Mlp& net, const ForwardCache& cache, const Vector& upstream) {
  detail::require(!cache.empty(), ErrorKind::kInvalidArgument,
                  "backward called without a forward cache");
  detail::require(cache.inputs.size() == net.layers.size(), ErrorKind::kDimensionMismatch,
                  "forward cache does not belong to this network");
  detail::require(upstream.size() == net.output_width(), ErrorKind::kDimensionMismatch, [&] { return std::string("upstream gradient has length ") + std::to_string(upstream.size()) + ", expected " + std::to_string(net.output_width()); });
  const std::size_t depth = net.layers.size();
  MlpGradients g;
  g.dW.resize(depth);
  g.db.resize(depth);
  Vector delta = upstream;
  if (net.output_map == OutputMap::kUnitInterval) delta *= 0.5;
  for (std::size_t k = depth; k-- > 0;) {
    const auto& layer = net.layers[k];
    Vector dz = delta.cwiseProduct(
        detail::activation_slope(layer.activation, cache.pre[k], cache.outputs[k]));
    g.dW[k] = cache.inputs[k] * dz.transpose();
    g.db[k] = dz;
    delta = layer.W * dz;
  }
  g.d_input = std::move(delta);
  return g;
}

/// Glorot-uniform weights, zero biases.
inline void initialize(Mlp& net, Rng& rng) {
  for (auto& layer : net.layers) {
    const double limit = std::sqrt(6.0 / (layer.fan_in() + layer.fan_out()));
    for (Eigen::Index c = 0; c < layer.W.cols(); ++c)
      for (Eigen::Index r = 0; r < layer.W.rows(); ++r) layer.W(r, c) = rng.uniform(-limit, limit);
    layer.b.setZero();
  }
}

/// theta <- theta - lr * grad. Throws and leaves the network untouched if any
/// gradient is non-finite.
inline void sgd_step(Mlp& net, const MlpGradients& grads, double lr) {
  detail::require(lr >= 0.0 && std::isfinite(lr), ErrorKind::kInvalidArgument,
                  "learning rate must be finite and >= 0");
  detail::require(grads.dW.size() == net.layers.size() && grads.db.size() == net.layers.size(),
                  ErrorKind::kDimensionMismatch, "gradient does not match network depth");
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    detail::require(grads.dW[l].rows() == net.layers[l].W.rows() &&
                        grads.dW[l].cols() == net.layers[l].W.cols() &&
                        grads.db[l].size() == net.layers[l].b.size(),
                    ErrorKind::kDimensionMismatch, [&] { return std::string("gradient shape mismatch in layer ") + std::to_string(l); });
    if (!grads.dW[l].allFinite() || !grads.db[l].allFinite())
      throw Error(ErrorKind::kNonFinite, "non-finite gradient in layer " + std::to_string(l));
  }
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    net.layers[l].W -= lr * grads.dW[l];
    net.layers[l].b -= lr * grads.db[l];
  }
}

// ---------------------------------------------------------------------------
// The QUBO solver network: a trainable 4-vector feeding a relu stack that
// ends in tanh and the unit-interval map.

inline constexpr int kFnnInputWidth = 4;

struct FnnModel {
  Vector input;  // trainable, length 4
  Mlp net;

  int n() const { return net.output_width(); }
  int depth() const { return static_cast<int>(net.layers.size()); }
};

struct FnnGradients {
  MlpGradients net;
  Vector d_input;  // same as net.d_input, kept for symmetry with the model
};

/// depth counts weight matrices. Hidden widths are n + 4, so the hidden
/// neuron count is (depth - 1)(n + 4) and the full count adds 4 + n.
inline FnnModel build_architecture(int n, int depth) {
  detail::require(n >= 1, ErrorKind::kInvalidArgument, "problem size must be >= 1");
  detail::require(depth >= 2, ErrorKind::kInvalidArgument, [&] { return std::string("depth must be >= 2, got ") + std::to_string(depth); });
  FnnModel m;
  m.input = Vector::Zero(kFnnInputWidth);
  int width = kFnnInputWidth;
  for (int l = 0; l + 1 < depth; ++l) {
    m.net.layers.emplace_back(width, n + 4, Activation::kRelu);
    width = n + 4;
  }
  m.net.layers.emplace_back(width, n, Activation::kTanh);
  m.net.output_map = OutputMap::kUnitInterval;
  return m;
}

inline int hidden_neuron_count(const FnnModel& m) {
  int s = 0;
  for (std::size_t l = 0; l + 1 < m.net.layers.size(); ++l) s += m.net.layers[l].fan_out();
  return s;
}

/// Glorot weights, zero biases, input ~ U(-1, 1).
inline void initialize(FnnModel& m, std::uint64_t seed) {
  Rng rng(seed);
  initialize(m.net, rng);
  for (Eigen::Index i = 0; i < m.input.size(); ++i) m.input[i] = rng.uniform(-1.0, 1.0);
}

inline FnnModel make_fnn(int n, int depth, std::uint64_t seed) {
  auto m = build_architecture(n, depth);
  initialize(m, seed);
  return m;
}

inline Vector forward(const FnnModel& m, ForwardCache* cache = nullptr) {
  return forward(m.net, m.input, cache);
}

inline FnnGradients backward(const FnnModel& m, const ForwardCache& cache, const Vector& upstream) {
  FnnGradients g;
  g.net = backward(m.net, cache, upstream);
  g.d_input = g.net.d_input;
  return g;
}

inline void sgd_step(FnnModel& m, const FnnGradients& g, double lr) {
  detail::require(g.d_input.size() == m.input.size(), ErrorKind::kDimensionMismatch,
                  "input gradient length mismatch");
  if (!g.d_input.allFinite())
    throw Error(ErrorKind::kNonFinite, "non-finite gradient for the trainable input");
  sgd_step(m.net, g.net, lr);  // validates the rest before touching anything
  m.input -= lr * g.d_input;
}

}  // namespace qfnn
