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

// Approximate parameter-shift gradients for a Trotterized stepwise drive.
//
// Up to a global phase, one segment of duration dt is
//   H = sum_j Omega_j/2 X_j - sum_j delta_j/2 Z_j + sum_{j<k} V'_jk/2 Z_j Z_k
// with delta_j = Delta_j - sum_{k != j} V_jk / 2 and V' = V / 2. Using
// R_P(phi) = exp(-i phi P / 2), each segment becomes
//   [Rx(dt Omega/2n) Rz(-dt delta/n) Rzz(dt V'/n) Rx(dt Omega/2n)]^n
// and adjacent Rx factors merge into n + 1 drive gates. Each gate angle is
// linear in one schedule value, so the gradient is the sum over the gates
// that share it of coeff * (<O>(phi + pi/2) - <O>(phi - pi/2)) / 2.

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "qfnn/error.hpp"
#include "qfnn/rydberg.hpp"

namespace qfnn {

enum class GateKind { kRx, kRz, kRzz };

struct TrotterGate {
  GateKind kind = GateKind::kRx;
  int a = 0;
  int b = 0;          // second atom of an Rzz gate
  double angle = 0.0;
  int parameter = -1;  // index into StepwiseSchedule::parameters(), -1 if fixed
  double coeff = 0.0;  // d angle / d parameter
};

/// Shifted detunings delta_j = Delta_j - sum_{k != j} V_jk / 2.
inline std::vector<double> shifted_detuning(const RydbergConfig& cfg, const std::vector<double>& delta) {
  std::vector<double> d = delta;
  for (int j = 0; j < cfg.q(); ++j)
    for (int k = 0; k < cfg.q(); ++k)
      if (k != j) d[j] -= cfg.interaction(j, k) / 2;
  return d;
}

inline std::vector<TrotterGate> trotter_circuit(const RydbergConfig& cfg, const StepwiseSchedule& s,
                                                int trotter_n) {
  detail::require(trotter_n >= 1, ErrorKind::kInvalidArgument, "Trotter number must be >= 1");
  cfg.validate();
  s.validate();
  detail::require(s.q() == cfg.q(), ErrorKind::kDimensionMismatch,
                  "schedule and configuration disagree on the atom count");
  const int q = cfg.q();
  const int N = s.segments();
  const double dt = s.segment_time;
  const double n = trotter_n;
  std::vector<TrotterGate> gates;
  for (int i = 0; i < N; ++i) {
    const auto delta = shifted_detuning(cfg, s.delta[i]);
    auto drive = [&](double c) {
      for (int j = 0; j < q; ++j)
        gates.push_back({GateKind::kRx, j, j, c * s.omega[i][j], i * q + j, c});
    };
    drive(dt / (2 * n));
    for (int r = 0; r < trotter_n; ++r) {
      for (int j = 0; j < q; ++j)
        gates.push_back({GateKind::kRz, j, j, -dt * delta[j] / n, N * q + i * q + j, -dt / n});
      for (int j = 0; j < q; ++j)
        for (int k = j + 1; k < q; ++k)
          gates.push_back({GateKind::kRzz, j, k, dt * cfg.interaction(j, k) / (2 * n), -1, 0.0});
      drive(r + 1 < trotter_n ? dt / n : dt / (2 * n));
    }
  }
  return gates;
}

namespace detail {

inline void apply_gate(const TrotterGate& g, double angle, StateVector& psi) {
  const Eigen::Index dim = psi.size();
  const Eigen::Index ma = Eigen::Index{1} << g.a;
  switch (g.kind) {
    case GateKind::kRx: {
      const double c = std::cos(angle / 2);
      const Complex s(0.0, -std::sin(angle / 2));
      for (Eigen::Index k = 0; k < dim; ++k) {
        if (k & ma) continue;
        const Complex p0 = psi[k], p1 = psi[k | ma];
        psi[k] = c * p0 + s * p1;
        psi[k | ma] = s * p0 + c * p1;
      }
      break;
    }
    case GateKind::kRz: {
      const Complex up = std::polar(1.0, -angle / 2), down = std::conj(up);
      for (Eigen::Index k = 0; k < dim; ++k) psi[k] *= (k & ma) ? up : down;
      break;
    }
    case GateKind::kRzz: {
      const Eigen::Index mb = Eigen::Index{1} << g.b;
      const Complex same = std::polar(1.0, -angle / 2), diff = std::conj(same);
      for (Eigen::Index k = 0; k < dim; ++k) psi[k] *= (((k & ma) != 0) == ((k & mb) != 0)) ? same : diff;
      break;
    }
  }
}

}  // namespace detail

/// Runs the circuit, optionally adding `shift` to the angle of gate `shifted`.
inline StateVector run_circuit(const std::vector<TrotterGate>& gates, const StateVector& initial,
                               std::ptrdiff_t shifted = -1, double shift = 0.0) {
  StateVector psi = initial;
  for (std::size_t g = 0; g < gates.size(); ++g)
    detail::apply_gate(gates[g], gates[g].angle + (static_cast<std::ptrdiff_t>(g) == shifted ? shift : 0.0), psi);
  return psi;
}

inline StateVector trotter_state(const RydbergConfig& cfg, const StepwiseSchedule& s, int trotter_n,
                                 const StateVector& initial) {
  return run_circuit(trotter_circuit(cfg, s, trotter_n), initial);
}

/// min over phi of || a - e^{i phi} b || for unit vectors.
inline double phase_invariant_distance(const StateVector& a, const StateVector& b) {
  return std::sqrt(std::max(0.0, 2.0 - 2.0 * std::abs(a.dot(b))));
}

/// Largest spectral scale of the three Trotter blocks over all segments.
inline double trotter_lambda(const RydbergConfig& cfg, const StepwiseSchedule& s) {
  const int q = cfg.q();
  double zz = 0.0;
  for (std::uint64_t k = 0; k < (std::uint64_t{1} << q); ++k) {
    double e = 0.0;
    for (int j = 0; j < q; ++j)
      for (int l = j + 1; l < q; ++l) {
        const double zj = (k >> j & 1) ? 1.0 : -1.0, zl = (k >> l & 1) ? 1.0 : -1.0;
        e += 0.5 * (cfg.interaction(j, l) / 2) * zj * zl;
      }
    zz = std::max(zz, std::abs(e));
  }
  double lambda = zz;
  for (int i = 0; i < s.segments(); ++i) {
    const auto delta = shifted_detuning(cfg, s.delta[i]);
    double x = 0.0, z = 0.0;
    for (int j = 0; j < q; ++j) {
      x += 0.5 * std::abs(s.omega[i][j]);
      z += 0.5 * std::abs(delta[j]);
    }
    lambda = std::max({lambda, x, z});
  }
  return lambda;
}

struct ParameterShiftResult {
  Matrix jacobian;  // q x parameter_count, same layout as finite_diff_jacobian
  double lambda = 0.0;
  double lambda_dt = 0.0;
  double error_budget = 0.0;  // N (lambda dt)^3 / n^2, order of magnitude only
  std::int64_t circuit_runs = 0;
  int trotter_n = 1;
};

inline ParameterShiftResult parameter_shift_grads(const RydbergConfig& cfg, const StepwiseSchedule& s,
                                                  int trotter_n, const StateVector* initial = nullptr) {
  const auto gates = trotter_circuit(cfg, s, trotter_n);
  const StateVector init = initial ? *initial : ground_state(cfg.q());
  ParameterShiftResult r;
  r.trotter_n = trotter_n;
  r.lambda = trotter_lambda(cfg, s);
  r.lambda_dt = r.lambda * s.segment_time;
  r.error_budget = s.segments() * std::pow(r.lambda_dt, 3) / (double(trotter_n) * trotter_n);
  r.jacobian = Matrix::Zero(cfg.q(), s.parameter_count());
  constexpr double kShift = std::numbers::pi / 2;
  for (std::size_t g = 0; g < gates.size(); ++g) {
    if (gates[g].parameter < 0) continue;
    const auto idx = static_cast<std::ptrdiff_t>(g);
    const Vector plus = expectations(run_circuit(gates, init, idx, kShift));
    const Vector minus = expectations(run_circuit(gates, init, idx, -kShift));
    r.circuit_runs += 2;
    r.jacobian.col(gates[g].parameter) += gates[g].coeff * 0.5 * (plus - minus);
  }
  return r;
}

/// Two atoms at the blockade spacing, two segments with distinct local
/// drives, started from a generic product state so that every parameter
/// enters the readout at first order. The segment length is chosen so that
/// trotter_lambda * segment_time = lambda_dt.
struct GradCheckFixture {
  RydbergConfig cfg;
  StepwiseSchedule sched;
  StateVector initial;
};

inline GradCheckFixture grad_check_fixture(double lambda_dt) {
  detail::require(lambda_dt > 0.0, ErrorKind::kInvalidArgument, "lambda * dt must be > 0");
  GradCheckFixture f;
  f.cfg = RydbergConfig::chain(2);
  const double om = f.cfg.omega_max, dh = f.cfg.delta_max / 2;
  f.sched.segment_time = 1.0;
  f.sched.omega = {{0.8 * om, 0.6 * om}, {0.5 * om, 0.9 * om}};
  f.sched.delta = {{0.3 * dh, -0.2 * dh}, {-0.1 * dh, 0.4 * dh}};
  f.sched.segment_time = lambda_dt / trotter_lambda(f.cfg, f.sched);
  const double th = std::numbers::pi / 3;
  const std::pair<Complex, Complex> amp[2] = {
      {std::cos(th / 2), std::polar(std::sin(th / 2), std::numbers::pi / 4)},
      {std::cos(th / 2), std::polar(std::sin(th / 2), -std::numbers::pi / 3)}};
  f.initial = product_state(amp);
  return f;
}

/// Relative Frobenius deviation || J_ps - J_fd || / || J_fd ||.
inline double relative_deviation(const Matrix& approx, const Matrix& reference) {
  return (approx - reference).norm() / reference.norm();
}

}  // namespace qfnn
