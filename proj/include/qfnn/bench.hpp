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

// Benchmark harness: per-instance solves in a worker pool, oracle
// comparison at small sizes, CSV records and grouped summaries.

#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <thread>
#include <tuple>
#include <vector>

#include "qfnn/error.hpp"
#include "qfnn/oracle.hpp"
#include "qfnn/postprocess.hpp"
#include "qfnn/qced.hpp"
#include "qfnn/qubo.hpp"
#include "qfnn/trainer.hpp"

namespace qfnn {

inline constexpr int kOracleMaxN = 20;
inline constexpr const char* kWorkersEnv = "QFNN_WORKERS";

enum class SolverKind { kFnn, kFnnPost, kQced };

inline std::string_view to_string(SolverKind k) {
  switch (k) {
    case SolverKind::kFnn: return "fnn";
    case SolverKind::kFnnPost: return "fnn+post";
    case SolverKind::kQced: return "qced";
  }
  return "fnn";
}

struct SolverConfig {
  SolverKind kind = SolverKind::kFnnPost;
  TrainConfig train;
  AnnealConfig anneal;
  QcedConfig qced;
};

struct SolveOutcome {
  SolutionVector solution;  // after refinement when enabled
  SolveResult run;
  std::optional<RefineResult> refined;
  double wall_seconds = 0.0;
};

/// One full solve, pre-sampling through post-processing, timed on the
/// monotonic clock.
inline SolveOutcome solve_instance(const QuboInstance& inst, const SolverConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  SolveOutcome out;
  if (cfg.kind == SolverKind::kQced) {
    out.run = train_qced(inst, cfg.qced).result;
  } else {
    out.run = train(inst, cfg.train);
  }
  out.solution = out.run.solution;
  if (cfg.kind == SolverKind::kFnnPost) {
    out.refined = refine(inst, out.solution.binary, cfg.anneal);
    if (out.refined->cost < out.solution.cost) {
      out.solution.binary = out.refined->x;
      out.solution.cost = out.refined->cost;
    }
  }
  out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

inline double time_solver(const QuboInstance& inst, const SolverConfig& cfg) {
  return solve_instance(inst, cfg).wall_seconds;
}

/// Worker count: QFNN_WORKERS when set to a positive integer, otherwise the
/// fallback, otherwise the hardware concurrency.
inline int worker_count(int fallback = 0) {
  if (const char* env = std::getenv(kWorkersEnv)) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
    throw Error(ErrorKind::kInvalidArgument,
                std::string(kWorkersEnv) + " must be a positive integer, got \"" + env + "\"");
  }
  if (fallback > 0) return fallback;
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs body(i) for i in [0, count) on `workers` threads.
template <typename Body>
void parallel_for(std::size_t count, int workers, Body&& body) {
  workers = std::max(1, std::min<int>(workers, static_cast<int>(std::max<std::size_t>(count, 1))));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < count;) body(i);
    });
  for (auto& t : pool) t.join();
}

struct BenchmarkRecord {
  std::string instance_id;
  ProblemClass class_tag = ProblemClass::kCustom;
  int n = 0;
  std::uint64_t instance_seed = 0;
  SolverKind solver = SolverKind::kFnn;
  std::uint64_t solver_seed = 0;
  int iterations = 0;
  double final_cost = 0.0;
  std::optional<double> optimal_cost;
  std::optional<double> percentage_error;  // absent without an oracle or when the optimum is 0
  std::optional<double> absolute_gap;
  double entropy = 0.0;
  double wall_seconds = 0.0;
  bool failed = false;
  std::string message;
};

struct SummaryRow {
  ProblemClass class_tag = ProblemClass::kCustom;
  int n = 0;
  SolverKind solver = SolverKind::kFnn;
  int count = 0;
  int failures = 0;
  int with_error = 0;
  double mean_error = 0.0;
  double std_error = 0.0;  // sample standard deviation
  double mean_cost = 0.0;
  double mean_wall = 0.0;
};

struct BenchmarkReport {
  std::vector<BenchmarkRecord> records;
  std::vector<SummaryRow> summary;
  bool any_failed() const {
    return std::any_of(records.begin(), records.end(), [](const auto& r) { return r.failed; });
  }
};

struct BenchSpec {
  std::vector<QuboInstance> instances;
  std::vector<std::string> ids;  // optional, defaults to the index
  SolverConfig solver;
  int workers = 1;
  int oracle_max_n = kOracleMaxN;
};

inline double mean(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

inline double sample_std(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

/// Mean and sample standard deviation per (class, n, solver), in record
/// order of first appearance.
inline std::vector<SummaryRow> summarize(const std::vector<BenchmarkRecord>& records) {
  using Key = std::tuple<int, int, int>;
  std::vector<Key> order;
  std::map<Key, std::vector<const BenchmarkRecord*>> groups;
  for (const auto& r : records) {
    Key k{static_cast<int>(r.class_tag), r.n, static_cast<int>(r.solver)};
    if (!groups.count(k)) order.push_back(k);
    groups[k].push_back(&r);
  }
  std::vector<SummaryRow> rows;
  for (const auto& k : order) {
    SummaryRow row;
    const auto& g = groups[k];
    row.class_tag = g.front()->class_tag;
    row.n = g.front()->n;
    row.solver = g.front()->solver;
    std::vector<double> err, cost, wall;
    for (const auto* r : g) {
      ++row.count;
      if (r->failed) {
        ++row.failures;
        continue;
      }
      cost.push_back(r->final_cost);
      wall.push_back(r->wall_seconds);
      if (r->percentage_error) err.push_back(*r->percentage_error);
    }
    row.with_error = static_cast<int>(err.size());
    row.mean_error = mean(err);
    row.std_error = sample_std(err);
    row.mean_cost = mean(cost);
    row.mean_wall = mean(wall);
    rows.push_back(row);
  }
  return rows;
}

inline std::uint64_t solver_seed_for(const SolverConfig& cfg, const QuboInstance& inst) {
  return mix_seed(cfg.kind == SolverKind::kQced ? cfg.qced.seed : cfg.train.seed, inst.seed);
}

inline BenchmarkReport run_benchmark(const BenchSpec& spec) {
  BenchmarkReport rep;
  rep.records.resize(spec.instances.size());
  parallel_for(spec.instances.size(), spec.workers, [&](std::size_t i) {
    const auto& inst = spec.instances[i];
    auto& rec = rep.records[i];
    rec.instance_id = i < spec.ids.size() ? spec.ids[i] : std::to_string(i);
    rec.class_tag = inst.class_tag;
    rec.n = inst.n();
    rec.instance_seed = inst.seed;
    rec.solver = spec.solver.kind;
    try {
      SolverConfig cfg = spec.solver;
      rec.solver_seed = solver_seed_for(cfg, inst);
      cfg.train.seed = cfg.qced.seed = rec.solver_seed;
      cfg.anneal.seed = mix_seed(spec.solver.anneal.seed, inst.seed);
      rec.iterations = cfg.kind == SolverKind::kQced ? cfg.qced.iterations : cfg.train.iterations;
      const auto out = solve_instance(inst, cfg);
      rec.final_cost = out.solution.cost;
      rec.entropy = out.solution.entropy;
      rec.wall_seconds = out.wall_seconds;
      if (out.run.diverged) rec.message = out.run.diagnostic;
      if (inst.n() <= spec.oracle_max_n) {
        const double opt = brute_force(inst).cost;
        rec.optimal_cost = opt;
        rec.absolute_gap = rec.final_cost - opt;
        if (opt != 0.0) rec.percentage_error = percentage_error(rec.final_cost, opt);
      }
    } catch (const std::exception& e) {
      rec.failed = true;
      rec.message = e.what();
    }
  });
  rep.summary = summarize(rep.records);
  return rep;
}

// ---------------------------------------------------------------------------
// CSV output. Floats use %.17g so values round-trip.

inline std::string csv_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string csv_optional(const std::optional<double>& v) { return v ? csv_double(*v) : ""; }

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

inline constexpr const char* kRecordHeader =
    "instance_id,class,n,instance_seed,solver,solver_seed,iterations,final_cost,optimal_cost,"
    "percentage_error,absolute_gap,entropy,wall_seconds,status,message";

inline void write_records_csv(std::ostream& os, const std::vector<BenchmarkRecord>& records) {
  os << kRecordHeader << '\n';
  for (const auto& r : records) {
    os << csv_escape(r.instance_id) << ',' << to_string(r.class_tag) << ',' << r.n << ','
       << r.instance_seed << ',' << to_string(r.solver) << ',' << r.solver_seed << ',' << r.iterations
       << ',' << csv_double(r.final_cost) << ',' << csv_optional(r.optimal_cost) << ','
       << csv_optional(r.percentage_error) << ',' << csv_optional(r.absolute_gap) << ','
       << csv_double(r.entropy) << ',' << csv_double(r.wall_seconds) << ','
       << (r.failed ? "failed" : "ok") << ',' << csv_escape(r.message) << '\n';
  }
}

inline constexpr const char* kSummaryHeader =
    "class,n,solver,count,failures,with_error,mean_error,std_error,mean_cost,mean_wall_seconds";

inline void write_summary_csv(std::ostream& os, const std::vector<SummaryRow>& rows) {
  os << kSummaryHeader << '\n';
  for (const auto& r : rows)
    os << to_string(r.class_tag) << ',' << r.n << ',' << to_string(r.solver) << ',' << r.count << ','
       << r.failures << ',' << r.with_error << ',' << csv_double(r.mean_error) << ','
       << csv_double(r.std_error) << ',' << csv_double(r.mean_cost) << ','
       << csv_double(r.mean_wall) << '\n';
}

// ---------------------------------------------------------------------------
// Power scan: error and entropy of the plain FNN as the diagonal exponent
// varies.

struct PowerScanRow {
  double power = 1.0;
  int count = 0;
  double mean_error = 0.0;
  double std_error = 0.0;
  double mean_entropy = 0.0;
  double mean_entropy_per_n = 0.0;
};

inline constexpr const char* kPowerScanHeader =
    "power,count,mean_error,std_error,mean_entropy,mean_entropy_per_n";

/// Every instance must be small enough for the oracle and have a nonzero
/// optimum.
inline std::vector<PowerScanRow> power_scan(const std::vector<QuboInstance>& instances,
                                            const std::vector<double>& powers, const TrainConfig& base,
                                            int workers = 1) {
  std::vector<double> optimum(instances.size());
  parallel_for(instances.size(), workers, [&](std::size_t i) { optimum[i] = brute_force(instances[i]).cost; });
  std::vector<PowerScanRow> rows;
  for (double p : powers) {
    std::vector<double> err(instances.size()), ent(instances.size()), ent_n(instances.size());
    parallel_for(instances.size(), workers, [&](std::size_t i) {
      TrainConfig cfg = base;
      cfg.power = p;
      cfg.seed = mix_seed(base.seed, instances[i].seed);
      const auto res = train(instances[i], cfg);
      err[i] = percentage_error(res.solution.cost, optimum[i]);
      ent[i] = res.final.entropy;
      ent_n[i] = ent[i] / instances[i].n();
    });
    PowerScanRow row;
    row.power = p;
    row.count = static_cast<int>(instances.size());
    row.mean_error = mean(err);
    row.std_error = sample_std(err);
    row.mean_entropy = mean(ent);
    row.mean_entropy_per_n = mean(ent_n);
    rows.push_back(row);
  }
  return rows;
}

inline void write_power_scan_csv(std::ostream& os, const std::vector<PowerScanRow>& rows) {
  os << kPowerScanHeader << '\n';
  for (const auto& r : rows)
    os << csv_double(r.power) << ',' << r.count << ',' << csv_double(r.mean_error) << ','
       << csv_double(r.std_error) << ',' << csv_double(r.mean_entropy) << ','
       << csv_double(r.mean_entropy_per_n) << '\n';
}

}  // namespace qfnn
