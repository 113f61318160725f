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

// Seeded generators for weighted MaxCut, MWIS, dense random QUBO and
// one-hot TSP instances.
//
// Random stream layout (fixtures depend on it, see Rng::kName):
//   maxcut: for each pair i<j in row-major order, one Bernoulli draw for the
//           edge, followed by one weight draw W ~ U(0,10] if the edge exists.
//   mwis:   n node weights W_i ~ U(0,10] first, then one Bernoulli draw per
//           pair i<j in row-major order.
//   random: upper triangle including the diagonal, row-major, U(-10,10).
//   tsp:    one draw U(0,1] per pair i<j in row-major order, then the whole
//           matrix is divided by its maximum.

#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "qfnn/error.hpp"
#include "qfnn/qubo.hpp"
#include "qfnn/rng.hpp"

namespace qfnn {

inline constexpr double kDefaultEdgeProbability = 0.5;
inline constexpr double kDefaultMwisPenalty = 10.0;
inline constexpr double kDefaultTspPenalty = 1.1;

struct GeneratorSpec {
  ProblemClass class_tag = ProblemClass::kRandom;
  int n = 10;  // variable count; city count for TSP
  std::uint64_t seed = 0;
  double mwis_penalty = kDefaultMwisPenalty;
  double tsp_penalty = kDefaultTspPenalty;
  double edge_probability = kDefaultEdgeProbability;
};

using Edge = std::pair<int, int>;

/// MaxCut QUBO from a symmetric weight matrix (zero diagonal):
/// Q_ii = -sum_j W_ij, Q_ij = W_ij, so that x^T Q x = -cut(x).
inline QuboInstance maxcut_from_weights(const Matrix& w) {
  detail::require(w.rows() == w.cols() && w.rows() >= 2,
                  ErrorKind::kDimensionMismatch, "weight matrix must be square, n >= 2");
  const Eigen::Index n = w.rows();
  Matrix q = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      q(i, j) = w(i, j);
      q(i, i) -= w(i, j);
    }
  }
  auto inst = QuboInstance::make(std::move(q), ProblemClass::kMaxCut);
  return inst;
}

inline QuboInstance gen_maxcut(int n, std::uint64_t seed,
                               double edge_probability = kDefaultEdgeProbability) {
  detail::require(n >= 2, ErrorKind::kInvalidArgument, "maxcut needs n >= 2");
  detail::require(edge_probability >= 0.0 && edge_probability <= 1.0,
                  ErrorKind::kInvalidArgument, "edge probability must lie in [0,1]");
  Rng rng(seed);
  Matrix w = Matrix::Zero(n, n);
  int edges = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (!rng.bernoulli(edge_probability)) continue;
      const double weight = rng.uniform_open_closed(10.0);
      w(i, j) = w(j, i) = weight;
      ++edges;
    }
  }
  auto inst = maxcut_from_weights(w);
  inst.seed = seed;
  inst.extra["edge_probability"] = edge_probability;
  inst.extra["edges"] = edges;
  return inst;
}

/// MWIS QUBO: Q_ii = -W_i and Q_ij = Q_ji = P for every edge, i.e. the
/// ordered-pair neighbor sum puts the full penalty on both entries.
inline QuboInstance mwis_from_graph(const std::vector<double>& weights,
                                    const std::vector<Edge>& edges, double penalty) {
  const int n = static_cast<int>(weights.size());
  detail::require(n >= 1, ErrorKind::kInvalidArgument, "mwis needs n >= 1");
  detail::require(penalty > 0.0, ErrorKind::kInvalidArgument, "penalty must be > 0");
  Matrix q = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) q(i, i) = -weights[i];
  for (auto [i, j] : edges) {
    detail::require(i != j && i >= 0 && j >= 0 && i < n && j < n,
                    ErrorKind::kInvalidArgument, "edge endpoint out of range");
    q(i, j) = q(j, i) = penalty;
  }
  auto inst = QuboInstance::make(std::move(q), ProblemClass::kMwis);
  inst.extra["penalty"] = penalty;
  return inst;
}

inline QuboInstance gen_mwis(int n, std::uint64_t seed, double penalty = kDefaultMwisPenalty,
                             double edge_probability = kDefaultEdgeProbability) {
  detail::require(n >= 1, ErrorKind::kInvalidArgument, "mwis needs n >= 1");
  detail::require(edge_probability >= 0.0 && edge_probability <= 1.0,
                  ErrorKind::kInvalidArgument, "edge probability must lie in [0,1]");
  Rng rng(seed);
  std::vector<double> weights(n);
  for (auto& w : weights) w = rng.uniform_open_closed(10.0);
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (rng.bernoulli(edge_probability)) edges.emplace_back(i, j);
    }
  }
  auto inst = mwis_from_graph(weights, edges, penalty);
  inst.seed = seed;
  inst.extra["edge_probability"] = edge_probability;
  inst.extra["edges"] = static_cast<double>(edges.size());
  return inst;
}

inline QuboInstance gen_random_qubo(int n, std::uint64_t seed) {
  detail::require(n >= 1, ErrorKind::kInvalidArgument, "random QUBO needs n >= 1");
  Rng rng(seed);
  Matrix q(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) q(i, j) = q(j, i) = rng.uniform(-10.0, 10.0);
  }
  return QuboInstance::make(std::move(q), ProblemClass::kRandom, seed);
}

/// Variable index of "city i visited at step p".
constexpr int tsp_var(int city, int step, int cities) { return city * cities + step; }

/// Random symmetric distances normalized so the largest equals 1.
inline Matrix tsp_distances(int cities, std::uint64_t seed) {
  detail::require(cities >= 3, ErrorKind::kInvalidArgument, "tsp needs >= 3 cities");
  Rng rng(seed);
  Matrix d = Matrix::Zero(cities, cities);
  for (int i = 0; i < cities; ++i) {
    for (int j = i + 1; j < cities; ++j) d(i, j) = d(j, i) = rng.uniform_open_closed(1.0);
  }
  return d / d.maxCoeff();
}

/// One-hot TSP encoding over cities^2 variables with a closed tour (step p+1
/// wraps). Squared constraint terms are expanded using x^2 = x; their
/// constant part 2 A cities is stored as extra["cost_offset"] so that
/// x^T Q x + cost_offset reproduces the full penalized tour functional.
inline QuboInstance tsp_from_distances(const Matrix& d, double penalty = kDefaultTspPenalty) {
  const int c = static_cast<int>(d.rows());
  detail::require(c >= 3 && d.cols() == c, ErrorKind::kInvalidArgument,
                  "tsp distance matrix must be square with >= 3 cities");
  const int n = c * c;
  Matrix q = Matrix::Zero(n, n);
  for (int i = 0; i < c; ++i) {
    for (int j = 0; j < c; ++j) {
      if (i == j) continue;
      for (int p = 0; p < c; ++p) {
        const int a = tsp_var(i, p, c);
        const int b = tsp_var(j, (p + 1) % c, c);
        q(a, b) += 0.5 * d(i, j);
        q(b, a) += 0.5 * d(i, j);
      }
    }
  }
  // A (1 - sum_i x_ip)^2 per step p and A (1 - sum_p x_ip)^2 per city i.
  for (int u = 0; u < c; ++u) {
    for (int v = 0; v < c; ++v) {
      q(tsp_var(u, v, c), tsp_var(u, v, c)) -= 2.0 * penalty;
      for (int w = 0; w < c; ++w) {
        if (w == u) continue;
        q(tsp_var(u, v, c), tsp_var(w, v, c)) += penalty;  // same step, other city
      }
      for (int w = 0; w < c; ++w) {
        if (w == v) continue;
        q(tsp_var(u, v, c), tsp_var(u, w, c)) += penalty;  // same city, other step
      }
    }
  }
  auto inst = QuboInstance::make(std::move(q), ProblemClass::kTsp);
  inst.extra["cities"] = c;
  inst.extra["penalty"] = penalty;
  inst.extra["cost_offset"] = 2.0 * penalty * c;
  return inst;
}

inline QuboInstance gen_tsp(int cities, std::uint64_t seed,
                            double penalty = kDefaultTspPenalty) {
  detail::require(cities >= 3, ErrorKind::kInvalidArgument, "tsp needs >= 3 cities");
  auto inst = tsp_from_distances(tsp_distances(cities, seed), penalty);
  inst.seed = seed;
  return inst;
}

/// Returns the tour (city per step) when x is a permutation matrix.
inline std::optional<std::vector<int>> tsp_tour(std::span<const std::uint8_t> x, int cities) {
  if (static_cast<int>(x.size()) != cities * cities) return std::nullopt;
  std::vector<int> tour(cities, -1);
  std::vector<int> seen(cities, 0);
  for (int p = 0; p < cities; ++p) {
    for (int i = 0; i < cities; ++i) {
      if (!x[tsp_var(i, p, cities)]) continue;
      if (tour[p] != -1 || seen[i]) return std::nullopt;
      tour[p] = i;
      seen[i] = 1;
    }
    if (tour[p] == -1) return std::nullopt;
  }
  return tour;
}

inline double tour_length(const Matrix& d, const std::vector<int>& tour) {
  double s = 0.0;
  const std::size_t c = tour.size();
  for (std::size_t p = 0; p < c; ++p) s += d(tour[p], tour[(p + 1) % c]);
  return s;
}

inline QuboInstance generate(const GeneratorSpec& spec) {
  switch (spec.class_tag) {
    case ProblemClass::kMaxCut: return gen_maxcut(spec.n, spec.seed, spec.edge_probability);
    case ProblemClass::kMwis:
      return gen_mwis(spec.n, spec.seed, spec.mwis_penalty, spec.edge_probability);
    case ProblemClass::kRandom: return gen_random_qubo(spec.n, spec.seed);
    case ProblemClass::kTsp: return gen_tsp(spec.n, spec.seed, spec.tsp_penalty);
    case ProblemClass::kCustom: break;
  }
  throw Error(ErrorKind::kInvalidArgument, "cannot generate instances of class custom");
}

}  // namespace qfnn
