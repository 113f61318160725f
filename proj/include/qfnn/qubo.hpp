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

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qfnn/error.hpp"

namespace qfnn {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Binary = std::vector<std::uint8_t>;

enum class ProblemClass { kMaxCut, kMwis, kRandom, kTsp, kCustom };

inline std::string_view to_string(ProblemClass c) {
  switch (c) {
    case ProblemClass::kMaxCut: return "maxcut";
    case ProblemClass::kMwis: return "mwis";
    case ProblemClass::kRandom: return "random";
    case ProblemClass::kTsp: return "tsp";
    case ProblemClass::kCustom: return "custom";
  }
  return "custom";
}

inline std::optional<ProblemClass> parse_problem_class(std::string_view s) {
  if (s == "maxcut") return ProblemClass::kMaxCut;
  if (s == "mwis") return ProblemClass::kMwis;
  if (s == "random") return ProblemClass::kRandom;
  if (s == "tsp") return ProblemClass::kTsp;
  if (s == "custom") return ProblemClass::kCustom;
  return std::nullopt;
}

/// A QUBO problem: minimize x^T Q x over x in {0,1}^n.
///
/// Q is always stored symmetric. Construction through make() replaces an
/// asymmetric input by (Q + Q^T) / 2, which leaves x^T Q x unchanged.
struct QuboInstance {
  Matrix Q;
  ProblemClass class_tag = ProblemClass::kCustom;
  std::uint64_t seed = 0;
  std::map<std::string, double> extra;
  std::vector<std::string> warnings;

  int n() const { return static_cast<int>(Q.rows()); }

  static QuboInstance make(Matrix q, ProblemClass tag = ProblemClass::kCustom,
                           std::uint64_t seed = 0) {
    detail::require(q.rows() >= 1 && q.rows() == q.cols(),
                    ErrorKind::kDimensionMismatch, [&] { return std::string("QUBO matrix must be square with n >= 1, got ") + std::to_string(q.rows()) + "x" + std::to_string(q.cols()); });
    detail::require(q.allFinite(), ErrorKind::kNonFinite,
                    "QUBO matrix has non-finite entries");
    QuboInstance inst;
    inst.class_tag = tag;
    inst.seed = seed;
    if (q != q.transpose()) {
      Matrix sym = 0.5 * (q + q.transpose());
      inst.warnings.push_back("asymmetric Q symmetrized as (Q+Q^T)/2");
      inst.Q = std::move(sym);
    } else {
      inst.Q = std::move(q);
    }
    return inst;
  }
};

/// Relaxed solution together with its rounded counterpart.
struct SolutionVector {
  Vector relaxed;
  Binary binary;
  double cost = 0.0;
  double entropy = 0.0;
};

namespace detail {

inline void check_length(const QuboInstance& inst, std::size_t len) {
  require(static_cast<int>(len) == inst.n(), ErrorKind::kDimensionMismatch, [&] {
    return "vector length " + std::to_string(len) + " does not match n = " +
           std::to_string(inst.n());
  });
}

inline void check_unit_box(const Vector& x) {
  constexpr double kTol = 1e-9;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    require(std::isfinite(x[i]) && x[i] >= -kTol && x[i] <= 1.0 + kTol, ErrorKind::kDomain, [&] {
      return "relaxed component " + std::to_string(i) + " = " + std::to_string(x[i]) +
             " lies outside [0,1]";
    });
  }
}

// Values within the tolerance band are pulled back into [0,1].
inline double clamp_unit(double v) { return std::clamp(v, 0.0, 1.0); }

}  // namespace detail

inline double qubo_cost(const QuboInstance& inst, std::span<const std::uint8_t> x) {
  detail::check_length(inst, x.size());
  const int n = inst.n();
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    if (x[i] > 1) throw Error(ErrorKind::kDomain, "binary vector entry is not 0/1");
    if (!x[i]) continue;
    for (int j = 0; j < n; ++j) {
      if (x[j]) s += inst.Q(i, j);
    }
  }
  return s;
}

/// Sum_i Q_ii x_i^power + sum_{i != j} Q_ij x_i x_j.
///
/// The value itself is regular at x_i = 0 for every power > 0; only the
/// gradient needs the interior clamp.
inline double relaxed_loss(const QuboInstance& inst, const Vector& x, double power = 1.0) {
  detail::check_length(inst, static_cast<std::size_t>(x.size()));
  detail::check_unit_box(x);
  detail::require(power > 0.0, ErrorKind::kDomain, "power must be > 0");
  const int n = inst.n();
  double s = 0.0;
  // Summation order mirrors qubo_cost so that binary inputs agree bit for bit.
  for (int i = 0; i < n; ++i) {
    const double xi = detail::clamp_unit(x[i]);
    if (xi == 0.0) continue;
    for (int j = 0; j < n; ++j) {
      if (i == j) {
        s += inst.Q(i, i) * (power == 1.0 ? xi : std::pow(xi, power));
      } else {
        const double xj = detail::clamp_unit(x[j]);
        if (xj != 0.0) s += inst.Q(i, j) * xi * xj;
      }
    }
  }
  return s;
}

/// Smallest x_i fed to x^(power-1) when power < 1.
inline constexpr double kInteriorClamp = 1e-12;

/// d relaxed_loss / dx_i = power Q_ii x_i^(power-1) + 2 sum_{j != i} Q_ij x_j.
inline Vector loss_gradient(const QuboInstance& inst, const Vector& x, double power = 1.0) {
  detail::check_length(inst, static_cast<std::size_t>(x.size()));
  detail::check_unit_box(x);
  detail::require(power > 0.0, ErrorKind::kDomain, "power must be > 0");
  const int n = inst.n();
  Vector xc = x.unaryExpr([](double v) { return detail::clamp_unit(v); });
  Vector g = 2.0 * (inst.Q * xc);
  for (int i = 0; i < n; ++i) {
    const double qii = inst.Q(i, i);
    g[i] -= 2.0 * qii * xc[i];
    double diag;
    if (power == 1.0) {
      diag = qii;
    } else {
      const double xi = power < 1.0 ? std::max(xc[i], kInteriorClamp) : xc[i];
      diag = power * qii * std::pow(xi, power - 1.0);
    }
    g[i] += diag;
  }
  return g;
}

/// -sum_i x_i ln x_i in nats, with 0 ln 0 = 0.
inline double shannon_entropy(const Vector& x) {
  detail::check_unit_box(x);
  double h = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double v = detail::clamp_unit(x[i]);
    if (v > 0.0) h -= v * std::log(v);
  }
  return h;
}

/// 100 (obtained - optimal) / |optimal|. A zero optimum has no relative
/// scale, so the caller must report the absolute gap instead.
inline double percentage_error(double obtained, double optimal) {
  detail::require(optimal != 0.0, ErrorKind::kDomain,
                  "optimal cost is 0; percentage error undefined, report the "
                  "absolute gap (obtained - optimal) instead");
  return 100.0 * (obtained - optimal) / std::abs(optimal);
}

/// Component-wise threshold at 0.5; an exact 0.5 rounds up to 1.
inline Binary round_solution(const Vector& x) {
  detail::check_unit_box(x);
  Binary b(static_cast<std::size_t>(x.size()));
  for (Eigen::Index i = 0; i < x.size(); ++i) b[i] = x[i] >= 0.5 ? 1 : 0;
  return b;
}

inline Vector to_vector(std::span<const std::uint8_t> b) {
  Vector v(static_cast<Eigen::Index>(b.size()));
  for (std::size_t i = 0; i < b.size(); ++i) v[static_cast<Eigen::Index>(i)] = b[i];
  return v;
}

}  // namespace qfnn
