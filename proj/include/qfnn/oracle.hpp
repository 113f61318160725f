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

// Exact ground truth by exhaustive Gray-code enumeration.

#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <vector>

#include "qfnn/error.hpp"
#include "qfnn/qubo.hpp"

namespace qfnn {

inline constexpr int kBruteForceMaxN = 24;
inline constexpr int kSpectrumMaxN = 20;
inline constexpr double kLevelTolerance = 1e-9;

struct OracleResult {
  Binary optimum;
  double cost = 0.0;
  std::uint64_t evaluations = 0;  // visited states, always 2^n
  std::uint64_t optimum_count = 0;
};

namespace detail {

inline bool lex_less(const Binary& a, const Binary& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

inline double level_tol(double ref) { return kLevelTolerance * std::max(1.0, std::abs(ref)); }

/// Visits all 2^n states in Gray-code order, calling visit(x, cost) once per
/// state starting from the zero vector. Each flip costs O(n) to keep the
/// local fields h_i = sum_{j != i} Q_ij x_j current.
template <typename Visit>
void gray_enumerate(const QuboInstance& inst, Visit&& visit) {
  const int n = inst.n();
  const auto& Q = inst.Q;
  Binary x(n, 0);
  std::vector<double> h(n, 0.0);
  double cost = 0.0;
  visit(x, cost);
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t k = 1; k < total; ++k) {
    const int i = std::countr_zero(k);
    const double sign = x[i] ? -1.0 : 1.0;
    cost += sign * (Q(i, i) + 2.0 * h[i]);
    x[i] ^= 1;
    for (int j = 0; j < n; ++j) {
      if (j != i) h[j] += sign * Q(j, i);
    }
    visit(x, cost);
  }
}

}  // namespace detail

/// Exact minimum of x^T Q x. Among optima equal within the level tolerance
/// the lexicographically smallest vector is returned; its cost is
/// re-evaluated directly so it carries no accumulated rounding.
inline OracleResult brute_force(const QuboInstance& inst) {
  detail::require(inst.n() <= kBruteForceMaxN, ErrorKind::kInvalidArgument, [&] { return std::string("brute force is capped at n = ") + std::to_string(kBruteForceMaxN) + " (got " + std::to_string(inst.n()) + "); use a heuristic solver instead"; });
  OracleResult r;
  double best = 0.0;
  bool have = false;
  detail::gray_enumerate(inst, [&](const Binary& x, double cost) {
    ++r.evaluations;
    if (!have || cost < best - detail::level_tol(best)) {
      best = cost;
      r.optimum = x;
      r.optimum_count = 1;
      have = true;
    } else if (std::abs(cost - best) <= detail::level_tol(best)) {
      ++r.optimum_count;
      if (detail::lex_less(x, r.optimum)) r.optimum = x;
    }
  });
  r.cost = qubo_cost(inst, r.optimum);
  return r;
}

struct Spectrum {
  std::vector<double> levels;            // ascending distinct costs
  std::vector<std::uint64_t> degeneracy;  // states per level
  std::vector<Binary> optima;            // ground-state vectors, at most max_optima
  std::uint64_t total_states = 0;        // 2^n
};

/// The k lowest distinct levels of x^T Q x. Costs within kLevelTolerance
/// (relative, floor 1) of a level's lowest member are merged into it.
inline Spectrum spectrum(const QuboInstance& inst, std::size_t k, std::size_t max_optima = 64) {
  detail::require(inst.n() <= kSpectrumMaxN, ErrorKind::kInvalidArgument, [&] { return std::string("spectrum is capped at n = ") + std::to_string(kSpectrumMaxN); });
  detail::require(k >= 1, ErrorKind::kInvalidArgument, "spectrum needs k >= 1");
  const int n = inst.n();
  std::vector<double> costs;
  costs.reserve(std::size_t{1} << n);
  detail::gray_enumerate(inst, [&](const Binary&, double cost) { costs.push_back(cost); });
  Spectrum s;
  s.total_states = costs.size();
  std::vector<double> sorted = costs;
  std::sort(sorted.begin(), sorted.end());
  for (double c : sorted) {
    if (s.levels.empty() || c > s.levels.back() + detail::level_tol(s.levels.back())) {
      if (s.levels.size() == k) break;
      s.levels.push_back(c);
      s.degeneracy.push_back(1);
    } else {
      ++s.degeneracy.back();
    }
  }
  const double ground = s.levels.front();
  detail::gray_enumerate(inst, [&](const Binary& x, double cost) {
    if (s.optima.size() < max_optima && std::abs(cost - ground) <= detail::level_tol(ground))
      s.optima.push_back(x);
  });
  std::sort(s.optima.begin(), s.optima.end(), detail::lex_less);
  return s;
}

/// Index of the level a cost falls on; costs between levels map to the next
/// higher level, costs above the truncated spectrum map to levels.size().
inline std::size_t level_index(const Spectrum& s, double cost) {
  for (std::size_t i = 0; i < s.levels.size(); ++i) {
    if (cost <= s.levels[i] + detail::level_tol(s.levels[i])) return i;
  }
  return s.levels.size();
}

}  // namespace qfnn
