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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "qfnn/qfnn.hpp"
#include "test_util.hpp"

namespace {

using namespace qfnn;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// 1000 random (Q, x) pairs: the relaxed loss at a binary point is the cost.
Outcome loss_equivalence() {
  Rng rng(101);
  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const int n = 1 + static_cast<int>(rng.index(15));
    const auto inst = testing::random_instance(n, 10'000 + t, 10.0);
    const Binary x = testing::random_binary(n, rng);
    worst = std::max(worst, std::abs(relaxed_loss(inst, to_vector(x), 1.0) - qubo_cost(inst, x)));
  }
  return {worst <= 1e-12, fmt("max |loss - cost| = %.3g over 1000 pairs", worst)};
}

double fnn_relative_gradient_error(int n, std::uint64_t seed) {
  const auto inst = testing::random_instance(n, 20'000 + seed);
  auto m = make_fnn(n, 4, seed);
  for (auto& layer : m.net.layers) layer.b.setConstant(0.05);
  ForwardCache cache;
  const Vector y = forward(m, &cache);
  const auto g = backward(m, cache, loss_gradient(inst, y));
  constexpr double h = 1e-6;
  double num = 0.0, den = 0.0;
  auto probe = [&](double analytic, double& slot) {
    const double keep = slot;
    slot = keep + h;
    const double up = relaxed_loss(inst, forward(m));
    slot = keep - h;
    const double down = relaxed_loss(inst, forward(m));
    slot = keep;
    const double fd = (up - down) / (2 * h);
    num += (analytic - fd) * (analytic - fd);
    den += fd * fd;
  };
  for (std::size_t l = 0; l < m.net.layers.size(); ++l) {
    auto& layer = m.net.layers[l];
    for (Eigen::Index r = 0; r < layer.W.rows(); ++r)
      for (Eigen::Index c = 0; c < layer.W.cols(); ++c) probe(g.net.dW[l](r, c), layer.W(r, c));
    for (Eigen::Index c = 0; c < layer.b.size(); ++c) probe(g.net.db[l][c], layer.b[c]);
  }
  for (Eigen::Index i = 0; i < m.input.size(); ++i) probe(g.d_input[i], m.input[i]);
  return std::sqrt(num / den);
}

// Largest-gradient weight of the first encoder layer against a central
// difference of the whole hybrid pipeline, q = 2 and n = 4.
double qced_relative_gradient_error() {
  const auto inst = testing::random_instance(4, 10, 0.5);
  auto m = make_qced(4, RydbergConfig::chain(2), 0);
  QcedCache cache;
  const Vector x = qced_forward(m, inst, &cache);
  const auto g = qced_backward(m, cache, loss_gradient(inst, x));
  Eigen::Index r, c;
  g.encoder.dW[0].cwiseAbs().maxCoeff(&r, &c);
  double& w = m.encoder.layers[0].W(r, c);
  const double keep = w, h = 1e-4;
  w = keep + h;
  const double up = relaxed_loss(inst, qced_forward(m, inst));
  w = keep - h;
  const double down = relaxed_loss(inst, qced_forward(m, inst));
  w = keep;
  const double fd = (up - down) / (2 * h);
  return std::abs(g.encoder.dW[0](r, c) - fd) / std::abs(fd);
}

Outcome gradient_suite() {
  double worst = 0.0;
  for (std::uint64_t s = 0; s < 20; ++s) worst = std::max(worst, fnn_relative_gradient_error(2 + s % 7, s));
  const double hybrid = qced_relative_gradient_error();
  return {worst <= 1e-4 && hybrid <= 1e-2,
          fmt("fnn worst relative error %.3g (20 models), qced encoder weight %.3g", worst, hybrid)};
}

Outcome power_scan_check() {
  std::vector<QuboInstance> suite;
  for (std::uint64_t s = 0; s < 20; ++s) suite.push_back(gen_random_qubo(12, s));
  const std::vector<double> powers{0.3, 0.5, 1.0, 1.5, 2.0};
  const auto rows = power_scan(suite, powers, TrainConfig{}, worker_count(1));
  auto row = [&](double p) {
    for (const auto& r : rows)
      if (r.power == p) return r;
    return PowerScanRow{};
  };
  const double n = 12;
  bool ok = row(1.0).mean_error <= row(0.5).mean_error && row(1.0).mean_error <= row(2.0).mean_error;
  for (double p : {1.0, 1.5, 2.0}) ok = ok && row(p).mean_entropy < 0.05 * n;
  ok = ok && row(0.3).mean_entropy > 0.2 * n;
  std::string d = "power:error%/entropy";
  for (const auto& r : rows) d += fmt(" %.1f:%.3f/%.3f", r.power, r.mean_error, r.mean_entropy);
  d += fmt(" (entropy bounds: < %.2f for power >= 1, > %.2f at 0.3)", 0.05 * n, 0.2 * n);
  return {ok, d};
}

Outcome solver_quality() {
  struct Case {
    const char* name;
    std::function<QuboInstance(std::uint64_t)> make;
    double bound;
  };
  const Case cases[] = {
      {"maxcut20", [](std::uint64_t s) { return gen_maxcut(20, s); }, 2.0},
      {"random20", [](std::uint64_t s) { return gen_random_qubo(20, s); }, 1.0},
      {"mwis20", [](std::uint64_t s) { return gen_mwis(20, s); }, 15.0},
      {"tsp4", [](std::uint64_t s) { return gen_tsp(4, s); }, 8.0},
  };
  bool ok = true;
  std::string d;
  for (const auto& c : cases) {
    BenchSpec spec;
    for (std::uint64_t s = 0; s < 100; ++s) spec.instances.push_back(c.make(1000 + s));
    spec.solver.kind = SolverKind::kFnnPost;
    spec.solver.train.iterations = 100;
    spec.solver.anneal.policy = AnnealPolicy::kRetainOnce;
    spec.workers = worker_count(1);
    const auto rep = run_benchmark(spec);
    const auto& row = rep.summary.at(0);
    const bool pass = !rep.any_failed() && row.with_error == 100 && row.mean_error <= c.bound;
    ok = ok && pass;
    d += fmt("%s%s %.3f%% +- %.3f (<= %.0f%%)", d.empty() ? "" : ", ", c.name, row.mean_error,
             row.std_error, c.bound);
  }
  return {ok, d};
}

Outcome refine_monotonicity() {
  Rng rng(505);
  int violations = 0;
  double worst_delta = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const int n = 1 + static_cast<int>(rng.index(15));
    const auto inst = testing::random_instance(n, 30'000 + t, 10.0);
    Binary x0 = testing::random_binary(n, rng);
    AnnealConfig cfg;
    cfg.seed = static_cast<std::uint64_t>(t);
    cfg.policy = t % 2 ? AnnealPolicy::kBoltzmann : AnnealPolicy::kRetainOnce;
    const double start = qubo_cost(inst, x0);
    if (refine(inst, x0, cfg).cost > start) ++violations;
    const int i = static_cast<int>(rng.index(n));
    const double delta = flip_delta(inst, x0, i);
    x0[i] ^= 1;
    worst_delta = std::max(worst_delta, std::abs(start + delta - qubo_cost(inst, x0)));
  }
  return {violations == 0 && worst_delta <= 1e-9,
          fmt("%d violations in 1000 triples, max incremental delta error %.3g", violations, worst_delta)};
}

Outcome runtime_scaling() {
  const auto inst = gen_maxcut(80, 8080);
  SolverConfig cfg;
  cfg.kind = SolverKind::kFnnPost;
  cfg.train.depth = 10;
  cfg.train.iterations = 100;
  const auto out = solve_instance(inst, cfg);
  return {out.wall_seconds <= 5.0 && !out.run.diverged,
          fmt("80-node maxcut, depth 10, 100 iterations + post: %.3f s, raw cost %.4f (oracle skipped)",
              out.wall_seconds, out.solution.cost)};
}

Outcome simulator_physics() {
  RydbergConfig atom;
  atom.positions = {{0.0, 0.0}};
  double rabi = 0.0;
  for (double t : {0.1, 0.25, 0.6, 1.0}) {
    const auto s = StepwiseSchedule::constant(t, {atom.omega_max}, {0.0});
    const auto psi = evolve(atom, s, ground_state(1)).state;
    rabi = std::max(rabi, std::abs(std::norm(psi[1]) - std::pow(std::sin(atom.omega_max * t / 2), 2)));
  }
  const auto sq = RydbergConfig::square();
  const std::vector<double> w{0.4 * sq.omega_max, 0.9 * sq.omega_max, 0.7 * sq.omega_max, 0.3 * sq.omega_max};
  const double dh = sq.delta_max / 2;
  const std::vector<double> d0{-0.6 * dh, -0.3 * dh, 0.2 * dh, -0.8 * dh}, sl{0.9 * dh, 0.5 * dh, -0.4 * dh, 0.7 * dh};
  const double drift = evolve(sq, LaserSchedule::make(sq, w, d0, sl), ground_state(4)).norm_drift;

  auto deviation = [](double ldt) {
    const auto f = grad_check_fixture(ldt);
    const auto ps = parameter_shift_grads(f.cfg, f.sched, 1, &f.initial);
    const auto fd = finite_diff_jacobian(f.cfg, f.sched, 1e-5, &f.initial);
    return relative_deviation(ps.jacobian, fd.jacobian);
  };
  const double small = deviation(0.01);
  bool monotone = true;
  double prev = small;
  std::string trend;
  for (double ldt : {0.05, 0.1, 0.2, 0.3, 0.4, 0.5}) {
    const double dev = deviation(ldt);
    monotone = monotone && dev > prev;
    prev = dev;
    trend += fmt(" %.2f:%.2e", ldt, dev);
  }
  return {rabi <= 1e-4 && drift <= 1e-6 && small <= 1e-2 && monotone,
          fmt("rabi error %.2e, norm drift %.2e, ps/fd deviation at 0.01: %.2e, trend", rabi, drift, small) + trend};
}

Outcome qced_activeness() {
  double enc = 0.0, dec = 0.0;
  std::vector<std::uint64_t> seeds(10);
  for (std::uint64_t s = 0; s < 10; ++s) seeds[s] = s;
  std::vector<double> e(10), d(10);
  parallel_for(seeds.size(), worker_count(1), [&](std::size_t i) {
    QcedConfig cfg;
    cfg.iterations = 20;
    cfg.seed = seeds[i];
    const auto out = train_qced(gen_maxcut(15, seeds[i]), cfg);
    e[i] = out.activeness.group_mean("encoder");
    d[i] = out.activeness.group_mean("decoder");
  });
  for (int i = 0; i < 10; ++i) {
    enc += e[i] / 10;
    dec += d[i] / 10;
  }
  return {enc <= dec, fmt("mean activeness over iterations 1-20: encoder %.4g%%, decoder %.4g%%", enc, dec)};
}

Outcome oracle_correctness() {
  Rng rng(909);
  int mismatches = 0;
  for (int t = 0; t < 50; ++t) {
    const int n = 1 + static_cast<int>(rng.index(12));
    const auto inst = testing::random_instance(n, 40'000 + t, 10.0);
    std::vector<double> cost(std::size_t{1} << n);
    double lowest = 0.0;
    for (std::uint64_t k = 0; k < cost.size(); ++k) {
      cost[k] = qubo_cost(inst, testing::lex_vector(k, n));
      lowest = k == 0 ? cost[k] : std::min(lowest, cost[k]);
    }
    Binary naive;
    double naive_cost = 0.0;
    const double tol = kLevelTolerance * std::max(1.0, std::abs(lowest));
    for (std::uint64_t k = 0; k < cost.size(); ++k)
      if (cost[k] <= lowest + tol) {
        naive = testing::lex_vector(k, n);
        naive_cost = cost[k];
        break;
      }
    const auto r = brute_force(inst);
    if (r.optimum != naive || r.cost != naive_cost) ++mismatches;
  }
  return {mismatches == 0, fmt("%d mismatches over 50 instances", mismatches)};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    Outcome (*run)();
    double budget_seconds;
  };
  const Criterion criteria[] = {
      {1, "loss equivalence", loss_equivalence, 1},
      {2, "gradient suite", gradient_suite, 120},
      {3, "power scan", power_scan_check, 300},
      {4, "solver quality", solver_quality, 900},
      {5, "post-processing monotonicity", refine_monotonicity, 60},
      {6, "runtime scaling", runtime_scaling, 5},
      {7, "simulator physics", simulator_physics, 120},
      {8, "qced activeness", qced_activeness, 600},
      {9, "oracle correctness", oracle_correctness, 30},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs <= c.budget_seconds;
    const bool pass = o.pass && in_time;
    if (!pass) ++failures;
    std::printf("[%s] %d %s: %s; %.2f s (budget %.0f s%s)\n", pass ? "PASS" : "FAIL", c.id, c.name,
                o.detail.c_str(), secs, c.budget_seconds, in_time ? "" : ", exceeded");
    std::fflush(stdout);
  }
  std::printf("%d of 9 criteria passed\n", 9 - failures);
  return failures == 0 ? 0 : 1;
}
