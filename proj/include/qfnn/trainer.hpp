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

// Unsupervised training of the FNN solver on the relaxed QUBO loss.

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

namespace qfnn {

inline constexpr double kDivergenceBound = 1e12;

struct TrainConfig {
  int iterations = 500;
  int presample_rounds = 20;
  int presample_epochs = 10;
  double lr = 0.03;
  double power = 1.0;
  std::uint64_t seed = 0;
  int depth = 7;

  void validate() const {
    detail::require(iterations >= 0 && presample_rounds >= 1 && presample_epochs >= 0,
                    ErrorKind::kInvalidArgument,
                    "iterations and presample_epochs must be >= 0, presample_rounds >= 1");
    detail::require(power > 0.0, ErrorKind::kInvalidArgument, "power must be > 0");
    detail::require(lr >= 0.0 && std::isfinite(lr), ErrorKind::kInvalidArgument,
                    "learning rate must be finite and >= 0");
    detail::require(depth >= 2, ErrorKind::kInvalidArgument, "depth must be >= 2");
  }
};

struct SolveResult {
  SolutionVector solution;  // best rounded iterate
  SolutionVector final;     // last iterate
  std::vector<double> loss_trace;
  double wall_time = 0.0;
  bool diverged = false;
  std::string diagnostic;
  TrainConfig config;
};

namespace detail {

inline SolutionVector package(const QuboInstance& inst, const Vector& x) {
  SolutionVector s;
  s.relaxed = x;
  s.binary = round_solution(x);
  s.cost = qubo_cost(inst, s.binary);
  s.entropy = shannon_entropy(x);
  return s;
}

struct StepOutcome {
  double loss;
  Vector x;
};

// One forward evaluation; returns nullopt-like NaN loss if the forward pass
// itself produced non-finite values.
inline StepOutcome evaluate(const QuboInstance& inst, const FnnModel& model, double power,
                            ForwardCache* cache) {
  try {
    Vector x = forward(model, cache);
    return {relaxed_loss(inst, x, power), std::move(x)};
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kNonFinite || e.kind() == ErrorKind::kDomain)
      return {std::numeric_limits<double>::quiet_NaN(), Vector()};
    throw;
  }
}

inline bool diverging(double loss) { return !std::isfinite(loss) || std::abs(loss) > kDivergenceBound; }

inline void descend(const QuboInstance& inst, FnnModel& model, const ForwardCache& cache,
                    const Vector& x, double power, double lr) {
  const Vector g = loss_gradient(inst, x, power);
  sgd_step(model, backward(model, cache, g), lr);
}

// Runs `steps` gradient steps and returns the loss after the last one
// (infinity if the run blew up).
inline double warmup(const QuboInstance& inst, FnnModel& model, int steps, double power, double lr) {
  ForwardCache cache;
  for (int s = 0; s <= steps; ++s) {
    auto out = evaluate(inst, model, power, &cache);
    if (diverging(out.loss)) return std::numeric_limits<double>::infinity();
    if (s == steps) return out.loss;
    try {
      descend(inst, model, cache, out.x, power, lr);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::kNonFinite) return std::numeric_limits<double>::infinity();
      throw;
    }
  }
  return std::numeric_limits<double>::infinity();
}

}  // namespace detail

struct PresampleResult {
  FnnModel model;
  std::vector<double> warmup_losses;  // one per round
  int chosen_round = 0;
};

/// Trains presample_rounds fresh initializations (seed + round) for
/// presample_epochs steps each and keeps the lowest final loss; ties go to
/// the lowest round index.
inline PresampleResult pre_sample(const QuboInstance& inst, const TrainConfig& cfg) {
  cfg.validate();
  PresampleResult best;
  double best_loss = std::numeric_limits<double>::infinity();
  for (int r = 0; r < cfg.presample_rounds; ++r) {
    FnnModel m = make_fnn(inst.n(), cfg.depth, cfg.seed + static_cast<std::uint64_t>(r));
    const double loss = detail::warmup(inst, m, cfg.presample_epochs, cfg.power, cfg.lr);
    best.warmup_losses.push_back(loss);
    if (r == 0 || loss < best_loss) {
      best_loss = loss;
      best.model = std::move(m);
      best.chosen_round = r;
    }
  }
  return best;
}

/// Pre-sampling followed by `iterations` plain gradient-descent steps. The
/// trace holds the loss before every step plus the final one.
inline SolveResult train(const QuboInstance& inst, const TrainConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  SolveResult res;
  res.config = cfg;
  FnnModel model = pre_sample(inst, cfg).model;
  ForwardCache cache;
  bool have_best = false;
  for (int k = 0; k <= cfg.iterations; ++k) {
    auto out = detail::evaluate(inst, model, cfg.power, &cache);
    if (detail::diverging(out.loss)) {
      res.diverged = true;
      res.diagnostic = "loss diverged at iteration " + std::to_string(k);
      break;
    }
    res.loss_trace.push_back(out.loss);
    auto sol = detail::package(inst, out.x);
    if (!have_best || sol.cost < res.solution.cost) {
      res.solution = sol;
      have_best = true;
    }
    res.final = std::move(sol);
    if (k == cfg.iterations) break;
    try {
      detail::descend(inst, model, cache, out.x, cfg.power, cfg.lr);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kNonFinite) throw;
      res.diverged = true;
      res.diagnostic = std::string("non-finite gradient at iteration ") + std::to_string(k);
      break;
    }
  }
  if (!have_best) {
    // Even the pre-sampled model was unusable; report the all-zero vector.
    res.solution = detail::package(inst, Vector::Zero(inst.n()));
    res.final = res.solution;
  }
  res.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

}  // namespace qfnn
