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

#include <gtest/gtest.h>

#include <cmath>

#include "qfnn/parameter_shift.hpp"

namespace qfnn {
namespace {

const double kGrid[] = {0.05, 0.1, 0.2, 0.3, 0.4, 0.5};

double ps_vs_fd(const GradCheckFixture& f, int n) {
  const auto ps = parameter_shift_grads(f.cfg, f.sched, n, &f.initial);
  const auto fd = finite_diff_jacobian(f.cfg, f.sched, 1e-5, &f.initial);
  return relative_deviation(ps.jacobian, fd.jacobian);
}

TEST(TrotterCircuit, GateLayout) {
  const auto f = grad_check_fixture(0.1);
  const auto gates = trotter_circuit(f.cfg, f.sched, 3);
  // Per segment: q leading drives, then n rounds of q Rz, one Rzz and q drives.
  const std::size_t per_segment = 2 + 3 * (2 + 1 + 2);
  EXPECT_EQ(gates.size(), 2 * per_segment);
  int rx = 0, rz = 0, rzz = 0;
  for (const auto& g : gates) {
    rx += g.kind == GateKind::kRx;
    rz += g.kind == GateKind::kRz;
    rzz += g.kind == GateKind::kRzz;
    if (g.kind == GateKind::kRzz) EXPECT_EQ(g.parameter, -1);
    else EXPECT_GE(g.parameter, 0);
  }
  EXPECT_EQ(rx, 2 * 2 * 4);
  EXPECT_EQ(rz, 2 * 3 * 2);
  EXPECT_EQ(rzz, 2 * 3);
  EXPECT_THROW(trotter_circuit(f.cfg, f.sched, 0), Error);
}

TEST(TrotterCircuit, DriveCoefficientsSumToSegmentTime) {
  const auto f = grad_check_fixture(0.2);
  const auto gates = trotter_circuit(f.cfg, f.sched, 4);
  std::vector<double> sum(f.sched.parameter_count(), 0.0);
  for (const auto& g : gates)
    if (g.parameter >= 0) sum[g.parameter] += g.coeff;
  const double dt = f.sched.segment_time;
  for (int m = 0; m < 4; ++m) EXPECT_NEAR(sum[m], dt, 1e-15);
  for (int m = 4; m < 8; ++m) EXPECT_NEAR(sum[m], -dt, 1e-15);
}

TEST(TrotterCircuit, SingleAtomIsExactWithoutDetuning) {
  RydbergConfig cfg;
  cfg.positions = {{0.0, 0.0}};
  const auto s = StepwiseSchedule::constant(0.3, {7.0}, {0.0});
  const auto a = trotter_state(cfg, s, 1, ground_state(1));
  const auto b = evolve_exact(cfg, s, ground_state(1));
  EXPECT_NEAR(std::abs(a.dot(b)), 1.0, 1e-13);
}

TEST(ParameterShift, SingleAtomAgreesWithFiniteDifferences) {
  RydbergConfig cfg;
  cfg.positions = {{0.0, 0.0}};
  StepwiseSchedule s;
  s.omega = {{0.7 * cfg.omega_max}, {0.4 * cfg.omega_max}};
  s.delta = {{0.2 * cfg.delta_max}, {-0.3 * cfg.delta_max}};
  s.segment_time = 1.0;
  s.segment_time = 0.01 / trotter_lambda(cfg, s);
  const std::pair<Complex, Complex> amp[1] = {{std::cos(0.4), std::polar(std::sin(0.4), 0.7)}};
  const StateVector init = product_state(amp);
  const auto ps = parameter_shift_grads(cfg, s, 1, &init);
  const auto fd = finite_diff_jacobian(cfg, s, 1e-5, &init);
  EXPECT_NEAR(ps.lambda_dt, 0.01, 1e-15);
  EXPECT_LE(relative_deviation(ps.jacobian, fd.jacobian), 1e-2);
  EXPECT_EQ(ps.circuit_runs, 2 * 2 * (2 + 1));
}

TEST(ParameterShift, FixtureHitsTheRequestedLambdaDt) {
  for (double ldt : kGrid) {
    const auto f = grad_check_fixture(ldt);
    EXPECT_NEAR(trotter_lambda(f.cfg, f.sched) * f.sched.segment_time, ldt, 1e-12);
  }
}

TEST(ParameterShift, DeviationGrowsWithLambdaDt) {
  double previous = 0.0;
  for (double ldt : kGrid) {
    const double dev = ps_vs_fd(grad_check_fixture(ldt), 1);
    EXPECT_GT(dev, previous) << "lambda dt = " << ldt;
    previous = dev;
  }
}

TEST(ParameterShift, DoublingTrotterNumberShrinksStateError) {
  for (double ldt : kGrid) {
    const auto f = grad_check_fixture(ldt);
    const auto exact = evolve_exact(f.cfg, f.sched, f.initial);
    const double e1 = phase_invariant_distance(trotter_state(f.cfg, f.sched, 1, f.initial), exact);
    const double e2 = phase_invariant_distance(trotter_state(f.cfg, f.sched, 2, f.initial), exact);
    EXPECT_GE(e1 / e2, 3.0) << "lambda dt = " << ldt;
  }
}

TEST(ParameterShift, ErrorBudgetMetadata) {
  const auto f = grad_check_fixture(0.2);
  const auto r1 = parameter_shift_grads(f.cfg, f.sched, 1, &f.initial);
  const auto r2 = parameter_shift_grads(f.cfg, f.sched, 2, &f.initial);
  EXPECT_NEAR(r1.error_budget, 2 * std::pow(0.2, 3), 1e-12);
  EXPECT_NEAR(r1.error_budget / r2.error_budget, 4.0, 1e-12);
  EXPECT_EQ(r2.trotter_n, 2);
  EXPECT_GT(r2.circuit_runs, r1.circuit_runs);
}

}  // namespace
}  // namespace qfnn
