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

// Bit-flip refinement of a binary solution with a decreasing temperature.
//
// Each round r = 1..rounds sweeps the bits once. A flip that beats the best
// cost seen so far is always taken. Other flips may be kept as the working
// candidate with probability exp(-(C_candidate - C_best) / T(r)):
//
//   kRetainOnce  after one such retention, the rest of the sweep accepts only
//                flips that improve the working candidate;
//   kBoltzmann   every non-improving flip gets the Boltzmann test.
//
// The sweep continues from the next index after a retention, and the working
// candidate carries over into the next round. The best vector seen is
// returned, so the result never costs more than the input.

#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qfnn/error.hpp"
#include "qfnn/qubo.hpp"
#include "qfnn/rng.hpp"

namespace qfnn {

enum class AnnealPolicy { kRetainOnce, kBoltzmann };

inline std::string_view to_string(AnnealPolicy p) {
  return p == AnnealPolicy::kRetainOnce ? "a" : "b";
}

inline std::optional<AnnealPolicy> parse_anneal_policy(std::string_view s) {
  if (s == "a") return AnnealPolicy::kRetainOnce;
  if (s == "b") return AnnealPolicy::kBoltzmann;
  return std::nullopt;
}

/// Stream tag mixed into refinement seeds so they never coincide with the
/// trainer's initialization streams.
inline constexpr std::uint64_t kRefineStream = 0x5245464eULL;

struct AnnealConfig {
  int rounds = 10;
  double a = 1.0;
  std::uint64_t seed = 0;
  AnnealPolicy policy = AnnealPolicy::kRetainOnce;

  void validate() const {
    detail::require(rounds >= 1, ErrorKind::kInvalidArgument, "anneal rounds must be >= 1");
    detail::require(a > 0.0 && std::isfinite(a), ErrorKind::kInvalidArgument,
                    "anneal constant a must be finite and > 0");
  }
};

/// T(r) = a |c_fnn| / (n r); zero when c_fnn = 0.
inline double temperature(int r, double a, double c_fnn, int n) {
  detail::require(r >= 1, ErrorKind::kInvalidArgument, "round index starts at 1");
  detail::require(n >= 1, ErrorKind::kInvalidArgument, "problem size must be >= 1");
  return a * std::abs(c_fnn) / (static_cast<double>(n) * r);
}

/// Cost change from flipping bit i, recomputed from scratch in O(n).
inline double flip_delta(const QuboInstance& inst, std::span<const std::uint8_t> x, int i) {
  detail::check_length(inst, x.size());
  detail::require(i >= 0 && i < inst.n(), ErrorKind::kInvalidArgument, "bit index out of range");
  double h = 0.0;
  for (int j = 0; j < inst.n(); ++j)
    if (j != i && x[j]) h += inst.Q(i, j);
  return (1.0 - 2.0 * x[i]) * (inst.Q(i, i) + 2.0 * h);
}

struct RefineResult {
  Binary x;
  double cost = 0.0;
  double initial_cost = 0.0;
  int improvements = 0;  // strict improvements of the best cost
  int retentions = 0;    // Boltzmann-accepted non-improving moves
};

inline RefineResult refine(const QuboInstance& inst, std::span<const std::uint8_t> x0,
                           const AnnealConfig& cfg) {
  cfg.validate();
  detail::check_length(inst, x0.size());
  for (auto b : x0)
    detail::require(b <= 1, ErrorKind::kDomain, "refine expects a binary start vector");
  const int n = inst.n();
  const auto& Q = inst.Q;
  Rng rng(mix_seed(cfg.seed, kRefineStream));

  RefineResult res;
  Binary x(x0.begin(), x0.end());
  res.initial_cost = qubo_cost(inst, x);
  std::vector<double> h(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (j != i && x[j]) h[i] += Q(i, j);

  auto apply_flip = [&](int i) {
    const double sign = x[i] ? -1.0 : 1.0;
    x[i] ^= 1;
    for (int j = 0; j < n; ++j)
      if (j != i) h[j] += sign * Q(j, i);
  };

  double current = res.initial_cost;
  double best = current;
  Binary best_x = x;
  for (int r = 1; r <= cfg.rounds; ++r) {
    const double t = temperature(r, cfg.a, res.initial_cost, n);
    bool retained = false;
    for (int i = 0; i < n; ++i) {
      const double candidate = current + (1.0 - 2.0 * x[i]) * (Q(i, i) + 2.0 * h[i]);
      if (candidate < best) {
        apply_flip(i);
        current = best = candidate;
        best_x = x;
        ++res.improvements;
      } else if (!retained || cfg.policy == AnnealPolicy::kBoltzmann) {
        const double p = t > 0.0 ? std::exp(-(candidate - best) / t) : 0.0;
        if (p > 0.0 && rng.uniform01() < p) {
          apply_flip(i);
          current = candidate;
          retained = true;
          ++res.retentions;
        }
      } else if (candidate < current) {
        apply_flip(i);
        current = candidate;
      }
    }
  }
  res.cost = qubo_cost(inst, best_x);
  // Guard the contract against drift in the incremental sums.
  if (res.cost > res.initial_cost) {
    best_x.assign(x0.begin(), x0.end());
    res.cost = res.initial_cost;
  }
  res.x = std::move(best_x);
  return res;
}

}  // namespace qfnn
