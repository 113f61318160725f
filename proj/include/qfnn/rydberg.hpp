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

// State-vector simulation of a small Rydberg atom array.
//
// Units: hbar = 1, frequencies in rad per time unit, lengths in micrometres.
// Basis: bit j of the state index is 1 when atom j is in the Rydberg state.
// With n_j = (1 + sigma^z_j) / 2 the ground state |g> has sigma^z = -1, so
// the all-ground product state is index 0 and reads out as Psi_z = -1.
//
//   H(t) = sum_j Omega_j(t)/2 sigma^x_j - sum_j Delta_j(t) n_j
//          + sum_{j<k} V_jk n_j n_k,            V_jk = C / |r_j - r_k|^6

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "qfnn/error.hpp"
#include "qfnn/qubo.hpp"

namespace qfnn {

using Complex = std::complex<double>;
using StateVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr int kMaxAtoms = 12;
/// Largest dt * (fastest rate) the integrator accepts.
inline constexpr double kStepResolution = 0.05;
inline constexpr double kDefaultFdEps = 1e-3;

struct Position {
  double x = 0.0;
  double y = 0.0;
};

/// Atom geometry, laser limits and integration settings. The defaults are a
/// desk-scale preset: Omega_max = 2 pi 2.5, Delta_max = 2 pi 10, C of the
/// 87Rb 70S state, T = 1 and a spacing at which neighbours see V = Omega_max.
struct RydbergConfig {
  std::vector<Position> positions;
  double C = kTwoPi * 862690.0;
  double omega_max = kTwoPi * 2.5;
  double delta_max = kTwoPi * 10.0;
  double T = 1.0;
  double alpha = 60.0;
  double beta = 0.0;
  double dt = 2.5e-4;

  int q() const { return static_cast<int>(positions.size()); }

  /// Spacing at which the pair interaction equals omega_max.
  double blockade_spacing() const { return std::pow(C / omega_max, 1.0 / 6.0); }

  double interaction(int j, int k) const {
    const double dx = positions[j].x - positions[k].x;
    const double dy = positions[j].y - positions[k].y;
    const double r2 = dx * dx + dy * dy;
    return C / (r2 * r2 * r2);
  }

  Matrix interactions() const {
    Matrix v = Matrix::Zero(q(), q());
    for (int j = 0; j < q(); ++j)
      for (int k = j + 1; k < q(); ++k) v(j, k) = v(k, j) = interaction(j, k);
    return v;
  }

  double max_interaction() const {
    double m = 0.0;
    for (int j = 0; j < q(); ++j)
      for (int k = j + 1; k < q(); ++k) m = std::max(m, interaction(j, k));
    return m;
  }

  void validate() const {
    detail::require(q() >= 1 && q() <= kMaxAtoms, ErrorKind::kInvalidArgument, [&] { return std::string("atom count must be in 1..") + std::to_string(kMaxAtoms); });
    detail::require(T > 0.0 && dt > 0.0 && std::isfinite(T) && std::isfinite(dt),
                    ErrorKind::kInvalidArgument, "T and dt must be finite and > 0");
    detail::require(omega_max >= 0.0 && delta_max >= 0.0 && C >= 0.0, ErrorKind::kInvalidArgument,
                    "omega_max, delta_max and C must be >= 0");
    for (int j = 0; j < q(); ++j)
      for (int k = j + 1; k < q(); ++k)
        detail::require(std::isfinite(interaction(j, k)), ErrorKind::kInvalidArgument, [&] { return std::string("atoms ") + std::to_string(j) + " and " + std::to_string(k) + " coincide"; });
  }

  /// Four atoms on a square of side blockade_spacing().
  static RydbergConfig square() {
    RydbergConfig c;
    const double a = c.blockade_spacing();
    c.positions = {{0.0, 0.0}, {a, 0.0}, {a, a}, {0.0, a}};
    c.alpha = 60.0 / c.T;
    return c;
  }

  /// q atoms on a line with blockade_spacing() between neighbours.
  static RydbergConfig chain(int q) {
    detail::require(q >= 1, ErrorKind::kInvalidArgument, "chain needs at least one atom");
    RydbergConfig c;
    const double a = c.blockade_spacing();
    for (int j = 0; j < q; ++j) c.positions.push_back({a * j, 0.0});
    c.alpha = 60.0 / c.T;
    return c;
  }

  /// The square for q = 4, a chain otherwise.
  static RydbergConfig preset(int q) { return q == 4 ? square() : chain(q); }
};

// ---------------------------------------------------------------------------
// Smooth schedule: a global sigmoid-step Rabi drive and linear detunings.

struct ParameterBounds {
  std::vector<double> lo, hi;
};

struct LaserSchedule {
  std::vector<double> omega;   // N step heights, first and last fixed at 0
  std::vector<double> delta0;  // per atom
  std::vector<double> slope;   // per atom
  double T = 1.0;
  double alpha = 60.0;
  double beta = 0.0;
  double omega_max = 0.0;
  double delta_max = 0.0;

  int segments() const { return static_cast<int>(omega.size()); }
  int free_steps() const { return segments() - 2; }
  int q() const { return static_cast<int>(delta0.size()); }
  int parameter_count() const { return free_steps() + 2 * q(); }

  /// Builds and bound-checks a schedule; omega_free holds the N - 2 interior
  /// step heights.
  static LaserSchedule make(const RydbergConfig& cfg, std::span<const double> omega_free,
                            std::span<const double> delta0, std::span<const double> slope) {
    detail::require(delta0.size() == static_cast<std::size_t>(cfg.q()) &&
                        slope.size() == static_cast<std::size_t>(cfg.q()),
                    ErrorKind::kDimensionMismatch, "one detuning and one slope per atom");
    detail::require(!omega_free.empty(), ErrorKind::kInvalidArgument,
                    "schedule needs at least one free Rabi step");
    LaserSchedule s;
    s.omega.push_back(0.0);
    s.omega.insert(s.omega.end(), omega_free.begin(), omega_free.end());
    s.omega.push_back(0.0);
    s.delta0.assign(delta0.begin(), delta0.end());
    s.slope.assign(slope.begin(), slope.end());
    s.T = cfg.T;
    s.alpha = cfg.alpha;
    s.beta = cfg.beta;
    s.omega_max = cfg.omega_max;
    s.delta_max = cfg.delta_max;
    s.validate();
    return s;
  }

  /// All-zero schedule with q free steps, the QCED layout.
  static LaserSchedule zeros(const RydbergConfig& cfg) {
    std::vector<double> w(cfg.q(), 0.0), z(cfg.q(), 0.0);
    return make(cfg, w, z, z);
  }

  ParameterBounds bounds() const {
    ParameterBounds b;
    for (int i = 0; i < free_steps(); ++i) {
      b.lo.push_back(0.0);
      b.hi.push_back(omega_max);
    }
    for (int j = 0; j < q(); ++j) {
      b.lo.push_back(-delta_max / 2);
      b.hi.push_back(delta_max / 2);
    }
    for (int j = 0; j < q(); ++j) {
      b.lo.push_back(-delta_max / (2 * T));
      b.hi.push_back(delta_max / (2 * T));
    }
    return b;
  }

  void validate() const {
    detail::require(segments() >= 3, ErrorKind::kInvalidArgument, "schedule needs N >= 3 segments");
    detail::require(omega.front() == 0.0 && omega.back() == 0.0, ErrorKind::kDomain,
                    "boundary Rabi steps must be zero");
    const auto p = parameters();
    const auto b = bounds();
    for (std::size_t m = 0; m < p.size(); ++m) {
      const double tol = 1e-9 * std::max(1.0, std::abs(b.hi[m]));
      detail::require(std::isfinite(p[m]) && p[m] >= b.lo[m] - tol && p[m] <= b.hi[m] + tol,
                      ErrorKind::kDomain, [&] {
                        return "laser parameter " + std::to_string(m) + " = " +
                               std::to_string(p[m]) + " outside [" + std::to_string(b.lo[m]) +
                               ", " + std::to_string(b.hi[m]) + "]";
                      });
    }
  }

  /// theta = (Omega_1..Omega_{N-2}, Delta_j(0)..., s_j...).
  std::vector<double> parameters() const {
    std::vector<double> p(omega.begin() + 1, omega.end() - 1);
    p.insert(p.end(), delta0.begin(), delta0.end());
    p.insert(p.end(), slope.begin(), slope.end());
    return p;
  }

  LaserSchedule with_parameters(std::span<const double> theta) const {
    detail::require(theta.size() == static_cast<std::size_t>(parameter_count()),
                    ErrorKind::kDimensionMismatch, "laser parameter vector has the wrong length");
    LaserSchedule s = *this;
    const int f = free_steps();
    for (int i = 0; i < f; ++i) s.omega[i + 1] = theta[i];
    for (int j = 0; j < q(); ++j) {
      s.delta0[j] = theta[f + j];
      s.slope[j] = theta[f + q() + j];
    }
    s.validate();
    return s;
  }

  // Drive interface used by evolve().
  double duration() const { return T; }
  std::vector<double> breakpoints() const { return {0.0, T}; }
  double max_omega() const { return *std::max_element(omega.begin(), omega.end()); }
  double max_abs_delta() const {
    double m = 0.0;
    for (int j = 0; j < q(); ++j)
      m = std::max({m, std::abs(delta0[j]), std::abs(delta0[j] + slope[j] * T)});
    return m;
  }
  void coefficients(double t, std::size_t, std::span<double> om, std::span<double> de) const;
};

inline void check_time(double t, double T) {
  detail::require(t >= 0.0 && t <= T, ErrorKind::kDomain, [&] {
    return "time " + std::to_string(t) + " outside [0, " + std::to_string(T) + "]";
  });
}

/// Sum of sigmoid steps approximating the piecewise-constant Rabi profile.
inline double omega_waveform(const LaserSchedule& s, double t) {
  check_time(t, s.T);
  const int n = s.segments();
  double v = 0.0;
  for (int i = 0; i < n; ++i) {
    const double w = i == 0 ? s.omega[0] : s.omega[i] - s.omega[i - 1];
    if (w == 0.0) continue;
    const double ti = i * s.T / n;
    v += w / (std::exp(-s.alpha * (t - ti) + s.beta) + 1.0);
  }
  return v;
}

inline double delta_waveform(const LaserSchedule& s, int j, double t) {
  check_time(t, s.T);
  detail::require(j >= 0 && j < s.q(), ErrorKind::kInvalidArgument, "atom index out of range");
  return s.delta0[j] + s.slope[j] * t;
}

inline void LaserSchedule::coefficients(double t, std::size_t, std::span<double> om,
                                        std::span<double> de) const {
  const double o = omega_waveform(*this, std::clamp(t, 0.0, T));
  for (int j = 0; j < q(); ++j) {
    om[j] = o;
    de[j] = delta0[j] + slope[j] * t;
  }
}

// ---------------------------------------------------------------------------
// Piecewise-constant schedule with local drives, as used by the Trotterized
// gradient estimator.

struct StepwiseSchedule {
  double segment_time = 0.0;
  std::vector<std::vector<double>> omega;  // [segment][atom]
  std::vector<std::vector<double>> delta;  // [segment][atom]

  int segments() const { return static_cast<int>(omega.size()); }
  int q() const { return omega.empty() ? 0 : static_cast<int>(omega.front().size()); }
  int parameter_count() const { return 2 * segments() * q(); }

  static StepwiseSchedule constant(double duration, std::vector<double> om, std::vector<double> de) {
    StepwiseSchedule s;
    s.segment_time = duration;
    s.omega = {std::move(om)};
    s.delta = {std::move(de)};
    s.validate();
    return s;
  }

  void validate() const {
    detail::require(segments() >= 1 && segment_time > 0.0, ErrorKind::kInvalidArgument,
                    "stepwise schedule needs >= 1 segment of positive length");
    detail::require(delta.size() == omega.size(), ErrorKind::kDimensionMismatch,
                    "omega and delta segment counts differ");
    for (int i = 0; i < segments(); ++i)
      detail::require(omega[i].size() == static_cast<std::size_t>(q()) &&
                          delta[i].size() == static_cast<std::size_t>(q()),
                      ErrorKind::kDimensionMismatch, "every segment needs one value per atom");
  }

  /// Omega block (segment-major) followed by the Delta block.
  std::vector<double> parameters() const {
    std::vector<double> p;
    for (const auto& row : omega) p.insert(p.end(), row.begin(), row.end());
    for (const auto& row : delta) p.insert(p.end(), row.begin(), row.end());
    return p;
  }

  StepwiseSchedule with_parameters(std::span<const double> theta) const {
    detail::require(theta.size() == static_cast<std::size_t>(parameter_count()),
                    ErrorKind::kDimensionMismatch, "stepwise parameter vector has the wrong length");
    StepwiseSchedule s = *this;
    std::size_t m = 0;
    for (auto& row : s.omega)
      for (auto& v : row) v = theta[m++];
    for (auto& row : s.delta)
      for (auto& v : row) v = theta[m++];
    return s;
  }

  ParameterBounds bounds() const {
    const auto inf = std::numeric_limits<double>::infinity();
    return {std::vector<double>(parameter_count(), -inf), std::vector<double>(parameter_count(), inf)};
  }

  double duration() const { return segment_time * segments(); }
  std::vector<double> breakpoints() const {
    std::vector<double> b;
    for (int i = 0; i <= segments(); ++i) b.push_back(i * segment_time);
    return b;
  }
  double max_omega() const {
    double m = 0.0;
    for (const auto& row : omega)
      for (double v : row) m = std::max(m, std::abs(v));
    return m;
  }
  double max_abs_delta() const {
    double m = 0.0;
    for (const auto& row : delta)
      for (double v : row) m = std::max(m, std::abs(v));
    return m;
  }
  void coefficients(double, std::size_t piece, std::span<double> om, std::span<double> de) const {
    std::copy(omega[piece].begin(), omega[piece].end(), om.begin());
    std::copy(delta[piece].begin(), delta[piece].end(), de.begin());
  }
};

// ---------------------------------------------------------------------------
// States and operators.

inline StateVector ground_state(int q) {
  StateVector s = StateVector::Zero(Eigen::Index{1} << q);
  s[0] = 1.0;
  return s;
}

/// Product state with atom j in amp[j].first |g> + amp[j].second |r>.
inline StateVector product_state(std::span<const std::pair<Complex, Complex>> amp) {
  const int q = static_cast<int>(amp.size());
  StateVector s(Eigen::Index{1} << q);
  for (Eigen::Index k = 0; k < s.size(); ++k) {
    Complex a = 1.0;
    for (int j = 0; j < q; ++j) a *= (k >> j & 1) ? amp[j].second : amp[j].first;
    s[k] = a;
  }
  return s / s.norm();
}

/// Psi_z^j = <sigma^z_j>, in [-1, 1].
inline Vector expectations(const StateVector& state) {
  const Eigen::Index dim = state.size();
  detail::require(dim >= 2 && (dim & (dim - 1)) == 0, ErrorKind::kDimensionMismatch,
                  "state dimension must be a power of two");
  const int q = std::countr_zero(static_cast<std::uint64_t>(dim));
  Vector z = Vector::Zero(q);
  for (Eigen::Index k = 0; k < dim; ++k) {
    const double p = std::norm(state[k]);
    for (int j = 0; j < q; ++j) z[j] += (k >> j & 1) ? p : -p;
  }
  return z;
}

namespace detail {

// sum_{j<k} V_jk n_j n_k for every basis state.
inline std::vector<double> interaction_diagonal(const Matrix& v) {
  const int q = static_cast<int>(v.rows());
  std::vector<double> d(std::size_t{1} << q, 0.0);
  for (std::size_t s = 0; s < d.size(); ++s)
    for (int j = 0; j < q; ++j)
      if (s >> j & 1)
        for (int k = j + 1; k < q; ++k)
          if (s >> k & 1) d[s] += v(j, k);
  return d;
}

}  // namespace detail

/// Dense H for one set of per-atom drive values.
inline ComplexMatrix hamiltonian_matrix(const RydbergConfig& cfg, std::span<const double> omega,
                                        std::span<const double> delta) {
  const int q = cfg.q();
  detail::require(omega.size() == static_cast<std::size_t>(q) && delta.size() == static_cast<std::size_t>(q),
                  ErrorKind::kDimensionMismatch, "one drive value per atom");
  const auto vd = detail::interaction_diagonal(cfg.interactions());
  const Eigen::Index dim = Eigen::Index{1} << q;
  ComplexMatrix h = ComplexMatrix::Zero(dim, dim);
  for (Eigen::Index s = 0; s < dim; ++s) {
    double d = vd[s];
    for (int j = 0; j < q; ++j) {
      if (s >> j & 1) d -= delta[j];
      h(s ^ (Eigen::Index{1} << j), s) += 0.5 * omega[j];
    }
    h(s, s) = d;
  }
  return h;
}

struct EvolveResult {
  StateVector state;
  double norm_drift = 0.0;  // | ||psi(T)|| - 1 | before renormalization
  std::int64_t steps = 0;
};

/// Fixed-step RK4 integration of i d/dt psi = H(t) psi. The step is the
/// largest h <= cfg.dt that divides every drive piece evenly.
template <typename Drive>
EvolveResult evolve(const RydbergConfig& cfg, const Drive& drive, const StateVector& initial) {
  cfg.validate();
  const int q = cfg.q();
  const Eigen::Index dim = Eigen::Index{1} << q;
  detail::require(initial.size() == dim, ErrorKind::kDimensionMismatch, [&] { return std::string("initial state has dimension ") + std::to_string(initial.size()) + ", expected " + std::to_string(dim); });
  detail::require(std::abs(initial.norm() - 1.0) <= 1e-9, ErrorKind::kDomain,
                  "initial state must be normalized");
  const double rate = std::max({drive.max_omega(), drive.max_abs_delta(), cfg.max_interaction()});
  detail::require(cfg.dt * rate <= kStepResolution, ErrorKind::kInvalidArgument, [&] {
    return "dt = " + std::to_string(cfg.dt) + " is too coarse: dt * max rate = " +
           std::to_string(cfg.dt * rate) + " exceeds " + std::to_string(kStepResolution);
  });
  const auto vd = detail::interaction_diagonal(cfg.interactions());

  std::vector<double> om(q), de(q), diag(dim);
  auto apply = [&](double t, std::size_t piece, const StateVector& psi, StateVector& out) {
    drive.coefficients(t, piece, om, de);
    // A uniform shift of the diagonal only changes the global phase; centring
    // the spectrum keeps the RK4 norm error small.
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (Eigen::Index s = 0; s < dim; ++s) {
      double d = vd[s];
      for (int j = 0; j < q; ++j)
        if (s >> j & 1) d -= de[j];
      diag[s] = d;
      lo = std::min(lo, d);
      hi = std::max(hi, d);
    }
    const double shift = 0.5 * (lo + hi);
    for (Eigen::Index s = 0; s < dim; ++s) {
      Complex acc = (diag[s] - shift) * psi[s];
      for (int j = 0; j < q; ++j) acc += 0.5 * om[j] * psi[s ^ (Eigen::Index{1} << j)];
      out[s] = Complex(acc.imag(), -acc.real());  // -i * acc
    }
  };

  EvolveResult res;
  StateVector psi = initial, k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim);
  const auto bp = drive.breakpoints();
  for (std::size_t piece = 0; piece + 1 < bp.size(); ++piece) {
    const double len = bp[piece + 1] - bp[piece];
    const auto m = static_cast<std::int64_t>(std::ceil(len / cfg.dt - 1e-9));
    const double h = len / static_cast<double>(m);
    for (std::int64_t k = 0; k < m; ++k) {
      const double t = bp[piece] + h * static_cast<double>(k);
      apply(t, piece, psi, k1);
      tmp = psi + (0.5 * h) * k1;
      apply(t + 0.5 * h, piece, tmp, k2);
      tmp = psi + (0.5 * h) * k2;
      apply(t + 0.5 * h, piece, tmp, k3);
      tmp = psi + h * k3;
      apply(t + h, piece, tmp, k4);
      psi += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      ++res.steps;
    }
  }
  if (!psi.allFinite()) throw Error(ErrorKind::kNonFinite, "state vector became non-finite");
  const double norm = psi.norm();
  res.norm_drift = std::abs(norm - 1.0);
  res.state = psi / norm;
  return res;
}

/// Exact propagation of a piecewise-constant schedule by diagonalizing each
/// segment's Hamiltonian.
inline StateVector evolve_exact(const RydbergConfig& cfg, const StepwiseSchedule& sched,
                                const StateVector& initial) {
  cfg.validate();
  sched.validate();
  detail::require(sched.q() == cfg.q(), ErrorKind::kDimensionMismatch,
                  "schedule and configuration disagree on the atom count");
  detail::require(initial.size() == (Eigen::Index{1} << cfg.q()), ErrorKind::kDimensionMismatch,
                  "initial state dimension mismatch");
  StateVector psi = initial;
  for (int i = 0; i < sched.segments(); ++i) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(
        hamiltonian_matrix(cfg, sched.omega[i], sched.delta[i]));
    const Eigen::VectorXcd phase =
        (es.eigenvalues().cast<Complex>() * Complex(0.0, -sched.segment_time)).array().exp().matrix();
    psi = es.eigenvectors() * phase.asDiagonal() * (es.eigenvectors().adjoint() * psi);
  }
  return psi;
}

/// Psi_z after the schedule: RK4 for the smooth drive, exact propagation for
/// the stepwise one.
inline Vector simulate(const RydbergConfig& cfg, const LaserSchedule& s, const StateVector& init) {
  return expectations(evolve(cfg, s, init).state);
}
inline Vector simulate(const RydbergConfig& cfg, const StepwiseSchedule& s, const StateVector& init) {
  return expectations(evolve_exact(cfg, s, init));
}

// ---------------------------------------------------------------------------
// Finite-difference gradients.

struct FdJacobian {
  Matrix jacobian;  // q x parameter_count, d Psi_z^j / d theta_m
  std::int64_t evolutions = 0;
};

namespace detail {

// Two evaluation points for parameter m: central when both fit inside the
// bounds, otherwise one-sided from the point itself.
inline std::pair<double, double> fd_points(double v, double eps, double lo, double hi) {
  if (v - eps < lo) return {v, v + eps};
  if (v + eps > hi) return {v - eps, v};
  return {v - eps, v + eps};
}

}  // namespace detail

/// d Psi_z / d theta by differences; exactly two evolutions per parameter.
template <typename Schedule>
FdJacobian finite_diff_jacobian(const RydbergConfig& cfg, const Schedule& sched,
                                double eps = kDefaultFdEps, const StateVector* initial = nullptr) {
  detail::require(eps > 0.0 && std::isfinite(eps), ErrorKind::kInvalidArgument, "eps must be > 0");
  const StateVector init = initial ? *initial : ground_state(cfg.q());
  const auto theta = sched.parameters();
  const auto b = sched.bounds();
  FdJacobian out;
  out.jacobian = Matrix::Zero(cfg.q(), static_cast<Eigen::Index>(theta.size()));
  for (std::size_t m = 0; m < theta.size(); ++m) {
    const auto [a, c] = detail::fd_points(theta[m], eps, b.lo[m], b.hi[m]);
    auto shifted = theta;
    shifted[m] = a;
    const Vector lo = simulate(cfg, sched.with_parameters(shifted), init);
    shifted[m] = c;
    const Vector hi = simulate(cfg, sched.with_parameters(shifted), init);
    out.evolutions += 2;
    out.jacobian.col(static_cast<Eigen::Index>(m)) = (hi - lo) / (c - a);
  }
  return out;
}

struct FdGradient {
  Vector gradient;
  std::int64_t evolutions = 0;
};

/// d loss(Psi_z) / d theta with the loss applied to each shifted readout.
template <typename Schedule>
FdGradient finite_diff_grads(const RydbergConfig& cfg, const Schedule& sched,
                             const std::function<double(const Vector&)>& loss,
                             double eps = kDefaultFdEps, const StateVector* initial = nullptr) {
  detail::require(eps > 0.0 && std::isfinite(eps), ErrorKind::kInvalidArgument, "eps must be > 0");
  const StateVector init = initial ? *initial : ground_state(cfg.q());
  const auto theta = sched.parameters();
  const auto b = sched.bounds();
  FdGradient out;
  out.gradient = Vector::Zero(static_cast<Eigen::Index>(theta.size()));
  for (std::size_t m = 0; m < theta.size(); ++m) {
    const auto [a, c] = detail::fd_points(theta[m], eps, b.lo[m], b.hi[m]);
    auto shifted = theta;
    shifted[m] = a;
    const double lo = loss(simulate(cfg, sched.with_parameters(shifted), init));
    shifted[m] = c;
    const double hi = loss(simulate(cfg, sched.with_parameters(shifted), init));
    out.evolutions += 2;
    out.gradient[static_cast<Eigen::Index>(m)] = (hi - lo) / (c - a);
  }
  return out;
}

}  // namespace qfnn
