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

// Quantum-classical encoder-decoder.
//
//   upper triangle of Q --encoder--> s in (0,1)^{3q} --range map--> theta
//   --Rydberg evolution--> Psi_z in [-1,1]^q --decoder--> x in [0,1]^n
//
// theta keeps the LaserSchedule layout (q Rabi steps, q initial detunings,
// q slopes) and is mapped as Omega = s Omega_max, Delta(0) = (s - 1/2)
// Delta_max, slope = (s - 1/2) Delta_max / T. The quantum layer is
// differentiated by finite differences.

#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "qfnn/error.hpp"
#include "qfnn/fnn.hpp"
#include "qfnn/qubo.hpp"
#include "qfnn/rng.hpp"
#include "qfnn/rydberg.hpp"
#include "qfnn/trainer.hpp"

namespace qfnn {

inline constexpr std::uint64_t kEncoderStream = 1;
inline constexpr std::uint64_t kDecoderStream = 2;
inline constexpr double kActivenessGuard = 1e-12;
inline constexpr int kActivenessIterations = 20;

struct QcedModel {
  Mlp encoder;
  RydbergConfig annealer;
  Mlp decoder;

  int n() const { return decoder.output_width(); }
  int q() const { return annealer.q(); }
};

/// Row-major upper triangle including the diagonal, length n(n+1)/2.
inline Vector flatten_upper(const QuboInstance& inst) {
  const int n = inst.n();
  Vector v(static_cast<Eigen::Index>(n) * (n + 1) / 2);
  Eigen::Index k = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) v[k++] = inst.Q(i, j);
  return v;
}

/// Encoder m -> m+3q -> m+3q -> 3q (relu, relu, sigmoid); decoder
/// q -> n+4 -> n+4 -> n (relu, relu, tanh, unit interval).
inline QcedModel build_qced(int n, const RydbergConfig& annealer) {
  detail::require(n >= 1, ErrorKind::kInvalidArgument, "problem size must be >= 1");
  annealer.validate();
  const int q = annealer.q();
  const int m = n * (n + 1) / 2;
  QcedModel model;
  model.annealer = annealer;
  model.encoder.layers.emplace_back(m, m + 3 * q, Activation::kRelu);
  model.encoder.layers.emplace_back(m + 3 * q, m + 3 * q, Activation::kRelu);
  model.encoder.layers.emplace_back(m + 3 * q, 3 * q, Activation::kSigmoid);
  model.decoder.layers.emplace_back(q, n + 4, Activation::kRelu);
  model.decoder.layers.emplace_back(n + 4, n + 4, Activation::kRelu);
  model.decoder.layers.emplace_back(n + 4, n, Activation::kTanh);
  model.decoder.output_map = OutputMap::kUnitInterval;
  return model;
}

inline void initialize(QcedModel& model, std::uint64_t seed) {
  Rng enc(mix_seed(seed, kEncoderStream)), dec(mix_seed(seed, kDecoderStream));
  initialize(model.encoder, enc);
  initialize(model.decoder, dec);
}

inline QcedModel make_qced(int n, const RydbergConfig& annealer, std::uint64_t seed) {
  auto m = build_qced(n, annealer);
  initialize(m, seed);
  return m;
}

/// d theta / d s for the range map, one entry per laser parameter.
inline Vector laser_scale(const RydbergConfig& cfg) {
  const int q = cfg.q();
  Vector d(3 * q);
  d.head(q).setConstant(cfg.omega_max);
  d.segment(q, q).setConstant(cfg.delta_max);
  d.tail(q).setConstant(cfg.delta_max / cfg.T);
  return d;
}

inline LaserSchedule laser_from_encoder(const RydbergConfig& cfg, const Vector& s) {
  const int q = cfg.q();
  detail::require(s.size() == 3 * q, ErrorKind::kDimensionMismatch,
                  "encoder output must have 3q entries");
  std::vector<double> om(q), d0(q), sl(q);
  for (int j = 0; j < q; ++j) {
    om[j] = s[j] * cfg.omega_max;
    d0[j] = (s[q + j] - 0.5) * cfg.delta_max;
    sl[j] = (s[2 * q + j] - 0.5) * cfg.delta_max / cfg.T;
  }
  return LaserSchedule::make(cfg, om, d0, sl);
}

struct QcedCache {
  ForwardCache encoder, decoder;
  Vector encoded;  // sigmoid outputs s
  LaserSchedule schedule;
  Vector psi;
};

inline Vector qced_forward(const QcedModel& model, const QuboInstance& inst, QcedCache* cache = nullptr) {
  detail::require(model.encoder.input_width() == inst.n() * (inst.n() + 1) / 2 && model.n() == inst.n(),
                  ErrorKind::kDimensionMismatch, "QCED model was built for a different problem size");
  QcedCache local;
  QcedCache& c = cache ? *cache : local;
  c.encoded = forward(model.encoder, flatten_upper(inst), &c.encoder);
  c.schedule = laser_from_encoder(model.annealer, c.encoded);
  c.psi = simulate(model.annealer, c.schedule, ground_state(model.q()));
  return forward(model.decoder, c.psi, &c.decoder);
}

struct QcedGradients {
  MlpGradients encoder, decoder;
  Vector d_psi;    // d loss / d Psi_z
  Vector d_laser;  // d loss / d theta
  std::int64_t evolutions = 0;
};

/// Hybrid reverse pass; the quantum Jacobian costs 2 * 3q evolutions.
inline QcedGradients qced_backward(const QcedModel& model, const QcedCache& cache, const Vector& upstream,
                                   double eps = kDefaultFdEps) {
  QcedGradients g;
  g.decoder = backward(model.decoder, cache.decoder, upstream);
  g.d_psi = g.decoder.d_input;
  const auto jac = finite_diff_jacobian(model.annealer, cache.schedule, eps);
  g.evolutions = jac.evolutions;
  g.d_laser = jac.jacobian.transpose() * g.d_psi;
  const Vector d_encoded = g.d_laser.cwiseProduct(laser_scale(model.annealer));
  g.encoder = backward(model.encoder, cache.encoder, d_encoded);
  return g;
}

inline void sgd_step(QcedModel& model, const QcedGradients& g, double lr) {
  // Validate both halves before touching either.
  if (!g.encoder.all_finite() || !g.decoder.all_finite())
    throw Error(ErrorKind::kNonFinite, "non-finite QCED gradient");
  sgd_step(model.encoder, g.encoder, lr);
  sgd_step(model.decoder, g.decoder, lr);
}

// ---------------------------------------------------------------------------
// Layer activeness.

/// Parameters of each layer (W then b), encoder layers first.
using ParameterSnapshot = std::vector<Vector>;

inline ParameterSnapshot snapshot(const QcedModel& model) {
  ParameterSnapshot s;
  for (const Mlp* net : {&model.encoder, &model.decoder})
    for (const auto& layer : net->layers) {
      Vector v(layer.parameter_count());
      v << Eigen::Map<const Vector>(layer.W.data(), layer.W.size()), layer.b;
      s.push_back(std::move(v));
    }
  return s;
}

inline std::vector<std::string> qced_layer_names(const QcedModel& model) {
  std::vector<std::string> names;
  for (std::size_t l = 0; l < model.encoder.layers.size(); ++l) names.push_back("encoder." + std::to_string(l));
  for (std::size_t l = 0; l < model.decoder.layers.size(); ++l) names.push_back("decoder." + std::to_string(l));
  return names;
}

struct ActivenessReport {
  std::vector<std::string> layers;
  std::vector<std::vector<double>> percent;  // [iteration][layer]
  int first_iteration = 1;

  int iterations() const { return static_cast<int>(percent.size()); }
  bool empty() const { return percent.empty(); }

  /// Mean over iterations for one layer.
  double layer_mean(std::size_t layer) const {
    double s = 0.0;
    for (const auto& row : percent) s += row[layer];
    return percent.empty() ? 0.0 : s / static_cast<double>(percent.size());
  }

  /// Mean over iterations and over all layers whose name starts with prefix.
  double group_mean(const std::string& prefix) const {
    double s = 0.0;
    int k = 0;
    for (std::size_t l = 0; l < layers.size(); ++l)
      if (layers[l].rfind(prefix, 0) == 0) {
        s += layer_mean(l);
        ++k;
      }
    return k ? s / k : 0.0;
  }
};

/// Row t holds, per layer, mean |theta_t - theta_{t-1}| / (|theta_{t-1}| +
/// 1e-12) in percent.
inline ActivenessReport layer_activeness(const std::vector<ParameterSnapshot>& history,
                                         std::vector<std::string> layer_names = {}) {
  detail::require(history.size() >= 2, ErrorKind::kInvalidArgument,
                  "activeness needs at least two snapshots");
  ActivenessReport r;
  const std::size_t layers = history.front().size();
  if (layer_names.empty())
    for (std::size_t l = 0; l < layers; ++l) layer_names.push_back("layer." + std::to_string(l));
  detail::require(layer_names.size() == layers, ErrorKind::kDimensionMismatch,
                  "one name per layer");
  r.layers = std::move(layer_names);
  for (std::size_t t = 1; t < history.size(); ++t) {
    detail::require(history[t].size() == layers, ErrorKind::kDimensionMismatch,
                    "snapshots disagree on the layer count");
    std::vector<double> row(layers);
    for (std::size_t l = 0; l < layers; ++l) {
      const Vector& prev = history[t - 1][l];
      const Vector& cur = history[t][l];
      detail::require(prev.size() == cur.size() && prev.size() > 0, ErrorKind::kDimensionMismatch,
                      "snapshots disagree on a layer shape");
      const auto rel = (cur - prev).array().abs() / (prev.array().abs() + kActivenessGuard);
      row[l] = 100.0 * rel.mean();
    }
    r.percent.push_back(std::move(row));
  }
  return r;
}

// ---------------------------------------------------------------------------
// Training.

struct QcedConfig {
  int iterations = 500;
  int presample_rounds = 20;
  int presample_epochs = 10;
  double lr = 0.03;
  std::uint64_t seed = 0;
  double eps = kDefaultFdEps;
  int activeness_iterations = kActivenessIterations;
  RydbergConfig annealer = RydbergConfig::square();

  void validate() const {
    detail::require(iterations >= 0 && presample_rounds >= 1 && presample_epochs >= 0 &&
                        activeness_iterations >= 0,
                    ErrorKind::kInvalidArgument, "QCED iteration counts must be non-negative");
    detail::require(lr >= 0.0 && std::isfinite(lr), ErrorKind::kInvalidArgument,
                    "learning rate must be finite and >= 0");
    detail::require(eps > 0.0, ErrorKind::kInvalidArgument, "eps must be > 0");
    annealer.validate();
  }
};

struct QcedResult {
  SolveResult result;
  ActivenessReport activeness;
  std::int64_t evolutions = 0;
  int chosen_round = 0;
};

namespace detail {

struct QcedStep {
  double loss;
  Vector x;
};

inline QcedStep qced_evaluate(const QcedModel& m, const QuboInstance& inst, QcedCache& cache) {
  try {
    Vector x = qced_forward(m, inst, &cache);
    return {relaxed_loss(inst, x, 1.0), std::move(x)};
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kNonFinite || e.kind() == ErrorKind::kDomain)
      return {std::numeric_limits<double>::quiet_NaN(), Vector()};
    throw;
  }
}

inline void qced_descend(QcedModel& m, const QuboInstance& inst, const QcedCache& cache, const Vector& x,
                         const QcedConfig& cfg, std::int64_t& evolutions) {
  const auto g = qced_backward(m, cache, loss_gradient(inst, x, 1.0), cfg.eps);
  evolutions += g.evolutions;
  sgd_step(m, g, cfg.lr);
}

}  // namespace detail

/// Same loop as train(): both networks are re-drawn for every pre-sampling
/// round (seed + round), the best warm-up loss wins, then the main loop
/// runs. Activeness rows cover the first min(activeness_iterations,
/// iterations) updates.
inline QcedResult train_qced(const QuboInstance& inst, const QcedConfig& cfg) {
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();
  QcedResult out;
  SolveResult& res = out.result;
  res.config.iterations = cfg.iterations;
  res.config.presample_rounds = cfg.presample_rounds;
  res.config.presample_epochs = cfg.presample_epochs;
  res.config.lr = cfg.lr;
  res.config.seed = cfg.seed;
  res.config.depth = 3;
  QcedCache cache;

  QcedModel model;
  double best_warm = std::numeric_limits<double>::infinity();
  for (int r = 0; r < cfg.presample_rounds; ++r) {
    QcedModel cand = make_qced(inst.n(), cfg.annealer, cfg.seed + static_cast<std::uint64_t>(r));
    double loss = std::numeric_limits<double>::infinity();
    for (int s = 0; s <= cfg.presample_epochs; ++s) {
      auto step = detail::qced_evaluate(cand, inst, cache);
      if (detail::diverging(step.loss)) {
        loss = std::numeric_limits<double>::infinity();
        break;
      }
      loss = step.loss;
      if (s == cfg.presample_epochs) break;
      try {
        detail::qced_descend(cand, inst, cache, step.x, cfg, out.evolutions);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::kNonFinite && e.kind() != ErrorKind::kDomain) throw;
        loss = std::numeric_limits<double>::infinity();
        break;
      }
    }
    if (r == 0 || loss < best_warm) {
      best_warm = loss;
      model = std::move(cand);
      out.chosen_round = r;
    }
  }

  const int tracked = std::min(cfg.activeness_iterations, cfg.iterations);
  std::vector<ParameterSnapshot> history;
  if (tracked > 0) history.push_back(snapshot(model));
  bool have_best = false;
  for (int k = 0; k <= cfg.iterations; ++k) {
    auto step = detail::qced_evaluate(model, inst, cache);
    if (detail::diverging(step.loss)) {
      res.diverged = true;
      res.diagnostic = "loss diverged at iteration " + std::to_string(k);
      break;
    }
    res.loss_trace.push_back(step.loss);
    auto sol = detail::package(inst, step.x);
    if (!have_best || sol.cost < res.solution.cost) {
      res.solution = sol;
      have_best = true;
    }
    res.final = std::move(sol);
    if (k == cfg.iterations) break;
    try {
      detail::qced_descend(model, inst, cache, step.x, cfg, out.evolutions);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kNonFinite && e.kind() != ErrorKind::kDomain) throw;
      res.diverged = true;
      res.diagnostic = std::string("update failed at iteration ") + std::to_string(k) + ": " + e.what();
      break;
    }
    if (k < tracked) history.push_back(snapshot(model));
  }
  if (!have_best) {
    res.solution = detail::package(inst, Vector::Zero(inst.n()));
    res.final = res.solution;
  }
  if (history.size() >= 2) out.activeness = layer_activeness(history, qced_layer_names(model));
  else out.activeness.layers = qced_layer_names(model);
  res.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

}  // namespace qfnn
