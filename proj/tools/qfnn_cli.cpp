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

// qfnn command-line interface.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qfnn/qfnn.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace qfnn;

namespace {

constexpr int kConfigVersion = 1;

// ---------------------------------------------------------------------------
// Config file: {"format": "qfnn-config", "version": 1, "train": {...},
// "anneal": {...}, "qced": {...}, "workers": N}. Unknown keys are errors.

template <typename T>
void take(const json& obj, const char* key, T& slot, const std::string& where) {
  if (!obj.contains(key)) return;
  try {
    slot = obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorKind::kParse, where + "." + key + " has the wrong type");
  }
}

void reject_unknown(const json& obj, std::initializer_list<const char*> known, const std::string& where) {
  if (!obj.is_object()) throw Error(ErrorKind::kParse, where + " must be an object");
  for (const auto& [k, v] : obj.items()) {
    bool ok = false;
    for (const char* name : known) ok = ok || k == name;
    if (!ok) throw Error(ErrorKind::kParse, "unknown config key " + where + "." + k);
  }
}

struct Settings {
  SolverConfig solver;
  int workers = 0;
};

Settings load_config(const std::string& path) {
  Settings s;
  if (path.empty()) return s;
  const json doc = detail::parse_json_document(detail::read_file(path), path);
  reject_unknown(doc, {"format", "version", "train", "anneal", "qced", "workers"}, "config");
  if (doc.value("format", std::string()) != "qfnn-config")
    throw Error(ErrorKind::kParse, path + ": missing format tag \"qfnn-config\"");
  if (doc.value("version", 0) != kConfigVersion)
    throw Error(ErrorKind::kParse, path + ": unsupported config version");
  take(doc, "workers", s.workers, "config");
  if (doc.contains("train")) {
    const auto& t = doc["train"];
    reject_unknown(t, {"iterations", "presample_rounds", "presample_epochs", "lr", "power", "seed", "depth"},
                   "train");
    auto& c = s.solver.train;
    take(t, "iterations", c.iterations, "train");
    take(t, "presample_rounds", c.presample_rounds, "train");
    take(t, "presample_epochs", c.presample_epochs, "train");
    take(t, "lr", c.lr, "train");
    take(t, "power", c.power, "train");
    take(t, "seed", c.seed, "train");
    take(t, "depth", c.depth, "train");
    c.validate();
  }
  if (doc.contains("anneal")) {
    const auto& a = doc["anneal"];
    reject_unknown(a, {"rounds", "a", "seed", "policy"}, "anneal");
    auto& c = s.solver.anneal;
    take(a, "rounds", c.rounds, "anneal");
    take(a, "a", c.a, "anneal");
    take(a, "seed", c.seed, "anneal");
    std::string policy(to_string(c.policy));
    take(a, "policy", policy, "anneal");
    const auto p = parse_anneal_policy(policy);
    if (!p) throw Error(ErrorKind::kParse, "anneal.policy must be \"a\" or \"b\"");
    c.policy = *p;
    c.validate();
  }
  if (doc.contains("qced")) {
    const auto& q = doc["qced"];
    reject_unknown(q, {"iterations", "presample_rounds", "presample_epochs", "lr", "seed", "eps"}, "qced");
    auto& c = s.solver.qced;
    take(q, "iterations", c.iterations, "qced");
    take(q, "presample_rounds", c.presample_rounds, "qced");
    take(q, "presample_epochs", c.presample_epochs, "qced");
    take(q, "lr", c.lr, "qced");
    take(q, "seed", c.seed, "qced");
    take(q, "eps", c.eps, "qced");
    c.validate();
  }
  return s;
}

// ---------------------------------------------------------------------------
// Output helpers.

json vector_json(const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

json solution_json(const SolutionVector& s) {
  return {{"binary", s.binary}, {"cost", s.cost}, {"entropy", s.entropy}, {"relaxed", vector_json(s.relaxed)}};
}

void emit(const json& doc, const std::string& out) {
  if (out.empty()) {
    std::cout << doc.dump(1) << '\n';
    return;
  }
  if (fs::path(out).has_parent_path()) fs::create_directories(fs::path(out).parent_path());
  detail::write_file(out, doc.dump(1) + "\n");
}

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream os(path);
  if (!os) throw Error(ErrorKind::kIo, "cannot write " + path.string());
  return os;
}

std::optional<double> oracle_cost(const QuboInstance& inst) {
  if (inst.n() > kOracleMaxN) return std::nullopt;
  return brute_force(inst).cost;
}

void add_optimum(json& doc, const QuboInstance& inst, double cost) {
  if (const auto opt = oracle_cost(inst)) {
    doc["optimal_cost"] = *opt;
    doc["absolute_gap"] = cost - *opt;
    if (*opt != 0.0) doc["percentage_error"] = percentage_error(cost, *opt);
  }
}

std::vector<fs::path> list_instances(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  return files;
}

std::string instance_file_name(ProblemClass c, int n, std::uint64_t seed) {
  return std::string(to_string(c)) + "_n" + std::to_string(n) + "_s" + std::to_string(seed) + ".json";
}

// ---------------------------------------------------------------------------
// Subcommands.

struct GenerateArgs {
  std::string cls = "random";
  int n = 12;
  int count = 1;
  std::uint64_t seed = 0;
  std::string out = ".";
  double mwis_penalty = kDefaultMwisPenalty;
  double tsp_penalty = kDefaultTspPenalty;
  double edge_probability = kDefaultEdgeProbability;
};

int run_generate(const GenerateArgs& a) {
  GeneratorSpec spec;
  spec.class_tag = *parse_problem_class(a.cls);
  spec.n = a.n;
  spec.mwis_penalty = a.mwis_penalty;
  spec.tsp_penalty = a.tsp_penalty;
  spec.edge_probability = a.edge_probability;
  fs::create_directories(a.out);
  for (int i = 0; i < a.count; ++i) {
    spec.seed = a.seed + static_cast<std::uint64_t>(i);
    const auto path = fs::path(a.out) / instance_file_name(spec.class_tag, a.n, spec.seed);
    save_instance(generate(spec), path);
    std::cout << path.string() << '\n';
  }
  return 0;
}

struct TrainFlags {
  std::optional<int> iters, depth, presample_rounds;
  std::optional<std::uint64_t> seed;
  std::optional<double> lr, power;
  std::string post;

  void apply(SolverConfig& cfg) const {
    if (iters) cfg.train.iterations = cfg.qced.iterations = *iters;
    if (depth) cfg.train.depth = *depth;
    if (presample_rounds) cfg.train.presample_rounds = cfg.qced.presample_rounds = *presample_rounds;
    if (seed) cfg.train.seed = cfg.qced.seed = *seed;
    if (lr) cfg.train.lr = cfg.qced.lr = *lr;
    if (power) cfg.train.power = *power;
    if (post == "off") {
      cfg.kind = SolverKind::kFnn;
    } else if (!post.empty()) {
      cfg.kind = SolverKind::kFnnPost;
      cfg.anneal.policy = *parse_anneal_policy(post);
    }
  }
};

void add_train_flags(CLI::App* sub, TrainFlags& f, bool with_post) {
  sub->add_option("--iters", f.iters, "Main-loop iterations");
  sub->add_option("--seed", f.seed, "Training seed");
  sub->add_option("--lr", f.lr, "Learning rate");
  sub->add_option("--presample-rounds", f.presample_rounds, "Pre-sampling rounds");
  if (with_post) {
    sub->add_option("--depth", f.depth, "Number of weight layers");
    sub->add_option("--power", f.power, "Diagonal exponent of the relaxed loss");
    sub->add_option("--post", f.post, "Post-processing: off, a or b")->check(CLI::IsMember({"off", "a", "b"}));
  }
}

struct SolveArgs {
  std::string in, out, checkpoint;
  TrainFlags flags;
};

int run_solve(const SolveArgs& a, const Settings& settings) {
  const auto inst = load_instance(a.in);
  SolverConfig cfg = settings.solver;
  a.flags.apply(cfg);
  const auto outcome = solve_instance(inst, cfg);
  json doc;
  doc["instance"] = a.in;
  doc["n"] = inst.n();
  doc["solver"] = std::string(to_string(cfg.kind));
  doc["config"] = {{"iterations", cfg.train.iterations}, {"depth", cfg.train.depth},
                   {"lr", cfg.train.lr},                 {"power", cfg.train.power},
                   {"seed", cfg.train.seed},             {"presample_rounds", cfg.train.presample_rounds},
                   {"presample_epochs", cfg.train.presample_epochs}};
  doc["solution"] = solution_json(outcome.solution);
  doc["final_iterate"] = solution_json(outcome.run.final);
  doc["loss_trace"] = outcome.run.loss_trace;
  doc["diverged"] = outcome.run.diverged;
  if (!outcome.run.diagnostic.empty()) doc["diagnostic"] = outcome.run.diagnostic;
  if (outcome.refined) {
    doc["post"] = {{"policy", std::string(to_string(cfg.anneal.policy))},
                   {"initial_cost", outcome.refined->initial_cost},
                   {"cost", outcome.refined->cost},
                   {"improvements", outcome.refined->improvements},
                   {"retentions", outcome.refined->retentions}};
  }
  doc["wall_seconds"] = outcome.wall_seconds;
  if (inst.extra.count("cost_offset")) doc["cost_offset"] = inst.extra.at("cost_offset");
  add_optimum(doc, inst, outcome.solution.cost);
  emit(doc, a.out);
  if (!a.out.empty())
    std::printf("cost %.10g in %.3f s -> %s\n", outcome.solution.cost, outcome.wall_seconds, a.out.c_str());
  return outcome.run.diverged ? 3 : 0;
}

struct QcedArgs {
  std::string in, out, report;
  TrainFlags flags;
};

int run_qced(const QcedArgs& a, const Settings& settings) {
  const auto inst = load_instance(a.in);
  SolverConfig cfg = settings.solver;
  a.flags.apply(cfg);
  const auto res = train_qced(inst, cfg.qced);
  json doc;
  doc["instance"] = a.in;
  doc["n"] = inst.n();
  doc["solver"] = "qced";
  doc["config"] = {{"iterations", cfg.qced.iterations}, {"lr", cfg.qced.lr}, {"seed", cfg.qced.seed},
                   {"presample_rounds", cfg.qced.presample_rounds}, {"atoms", cfg.qced.annealer.q()}};
  doc["solution"] = solution_json(res.result.solution);
  doc["loss_trace"] = res.result.loss_trace;
  doc["evolutions"] = res.evolutions;
  doc["chosen_round"] = res.chosen_round;
  doc["diverged"] = res.result.diverged;
  doc["wall_seconds"] = res.result.wall_time;
  json act = json::object();
  for (std::size_t l = 0; l < res.activeness.layers.size(); ++l)
    act[res.activeness.layers[l]] = res.activeness.empty() ? 0.0 : res.activeness.layer_mean(l);
  doc["mean_activeness_percent"] = act;
  add_optimum(doc, inst, res.result.solution.cost);
  if (!a.report.empty()) {
    auto os = open_out(a.report);
    os << "iteration";
    for (const auto& name : res.activeness.layers) os << ',' << name;
    os << '\n';
    for (int t = 0; t < res.activeness.iterations(); ++t) {
      os << res.activeness.first_iteration + t;
      for (double v : res.activeness.percent[t]) os << ',' << csv_double(v);
      os << '\n';
    }
  }
  emit(doc, a.out);
  return res.result.diverged ? 3 : 0;
}

struct OracleArgs {
  std::string in, out;
  std::size_t spectrum = 0;
};

int run_oracle(const OracleArgs& a) {
  const auto inst = load_instance(a.in);
  const auto r = brute_force(inst);
  json doc{{"instance", a.in},        {"n", inst.n()},          {"optimum", r.optimum},
           {"cost", r.cost},          {"evaluations", r.evaluations}, {"optimum_count", r.optimum_count}};
  if (a.spectrum > 0) {
    const auto s = spectrum(inst, a.spectrum);
    doc["levels"] = s.levels;
    doc["degeneracy"] = s.degeneracy;
  }
  emit(doc, a.out);
  return 0;
}

struct BenchArgs {
  std::string dir, cls, out_dir = "bench_out", solver = "fnn";
  int n = 12, count = 0;
  std::uint64_t instance_seed = 0;
  std::optional<int> workers;
  TrainFlags flags;
};

int run_bench(const BenchArgs& a, const Settings& settings) {
  BenchSpec spec;
  spec.solver = settings.solver;
  if (a.flags.post.empty()) spec.solver.kind = SolverKind::kFnnPost;
  a.flags.apply(spec.solver);
  if (a.solver == "qced") spec.solver.kind = SolverKind::kQced;
  if (!a.dir.empty()) {
    for (const auto& p : list_instances(a.dir)) {
      spec.instances.push_back(load_instance(p));
      spec.ids.push_back(p.stem().string());
    }
  } else if (!a.cls.empty()) {
    GeneratorSpec g;
    g.class_tag = *parse_problem_class(a.cls);
    g.n = a.n;
    for (int i = 0; i < a.count; ++i) {
      g.seed = a.instance_seed + static_cast<std::uint64_t>(i);
      spec.instances.push_back(generate(g));
      spec.ids.push_back(fs::path(instance_file_name(g.class_tag, g.n, g.seed)).stem().string());
    }
  }
  spec.workers = worker_count(a.workers.value_or(settings.workers));
  const auto rep = run_benchmark(spec);

  fs::create_directories(a.out_dir);
  std::map<std::string, std::vector<BenchmarkRecord>> groups;
  for (const auto& r : rep.records)
    groups[std::string(to_string(r.class_tag)) + "_n" + std::to_string(r.n) + "_" +
           (r.solver == SolverKind::kFnnPost ? "fnn-post" : std::string(to_string(r.solver)))]
        .push_back(r);
  if (groups.empty()) {
    auto os = open_out(fs::path(a.out_dir) / "records.csv");
    write_records_csv(os, {});
  }
  for (const auto& [name, recs] : groups) {
    auto os = open_out(fs::path(a.out_dir) / ("records_" + name + ".csv"));
    write_records_csv(os, recs);
  }
  {
    auto os = open_out(fs::path(a.out_dir) / "summary.csv");
    write_summary_csv(os, rep.summary);
  }
  write_summary_csv(std::cout, rep.summary);
  for (const auto& r : rep.records)
    if (r.failed) std::cerr << "instance " << r.instance_id << " failed: " << r.message << '\n';
  return rep.any_failed() ? 1 : 0;
}

struct GradCheckArgs {
  std::vector<double> grid{0.01, 0.05, 0.1, 0.2, 0.3, 0.4, 0.5};
  int trotter_n = 1;
  double eps = 1e-5;
  std::string out;
};

int run_grad_check(const GradCheckArgs& a) {
  std::ostringstream os;
  os << "lambda_dt,output,parameter,finite_diff,parameter_shift,relative_deviation\n";
  for (double ldt : a.grid) {
    const auto f = grad_check_fixture(ldt);
    const auto ps = parameter_shift_grads(f.cfg, f.sched, a.trotter_n, &f.initial);
    const auto fd = finite_diff_jacobian(f.cfg, f.sched, a.eps, &f.initial);
    const double dev = relative_deviation(ps.jacobian, fd.jacobian);
    for (Eigen::Index r = 0; r < fd.jacobian.rows(); ++r)
      for (Eigen::Index c = 0; c < fd.jacobian.cols(); ++c)
        os << csv_double(ldt) << ',' << r << ',' << c << ',' << csv_double(fd.jacobian(r, c)) << ','
           << csv_double(ps.jacobian(r, c)) << ',' << csv_double(dev) << '\n';
    std::fprintf(stderr, "lambda*dt %.3f: relative deviation %.3e\n", ldt, dev);
  }
  if (a.out.empty()) {
    std::cout << os.str();
  } else {
    auto f = open_out(a.out);
    f << os.str();
  }
  return 0;
}

struct PowerScanArgs {
  std::string cls = "random", out;
  int n = 12, count = 20;
  std::uint64_t instance_seed = 0;
  std::vector<double> powers{0.3, 0.5, 1.0, 1.5, 2.0};
  std::optional<int> workers;
  TrainFlags flags;
};

int run_power_scan(const PowerScanArgs& a, const Settings& settings) {
  SolverConfig cfg = settings.solver;
  a.flags.apply(cfg);
  GeneratorSpec g;
  g.class_tag = *parse_problem_class(a.cls);
  g.n = a.n;
  std::vector<QuboInstance> suite;
  for (int i = 0; i < a.count; ++i) {
    g.seed = a.instance_seed + static_cast<std::uint64_t>(i);
    suite.push_back(generate(g));
  }
  const auto rows = power_scan(suite, a.powers, cfg.train, worker_count(a.workers.value_or(settings.workers)));
  if (a.out.empty()) {
    write_power_scan_csv(std::cout, rows);
  } else {
    auto os = open_out(a.out);
    write_power_scan_csv(os, rows);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qfnn: neural QUBO solvers, Rydberg simulation and benchmarks"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "Versioned JSON config (format qfnn-config, version 1)")
      ->check(CLI::ExistingFile);
  const std::vector<std::string> classes{"maxcut", "mwis", "random", "tsp"};

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "Write generated instances as JSON files");
  g->add_option("--class", gen.cls, "Problem class")->check(CLI::IsMember(classes));
  g->add_option("--n", gen.n, "Variables (cities for tsp)");
  g->add_option("--count", gen.count, "Number of instances")->check(CLI::NonNegativeNumber);
  g->add_option("--seed", gen.seed, "First instance seed");
  g->add_option("--out", gen.out, "Output directory");
  g->add_option("--mwis-penalty", gen.mwis_penalty, "MWIS edge penalty");
  g->add_option("--tsp-penalty", gen.tsp_penalty, "TSP constraint penalty");
  g->add_option("--edge-probability", gen.edge_probability, "Graph edge probability");

  SolveArgs solve;
  auto* s = app.add_subcommand("solve", "Train the FNN solver on one instance");
  s->add_option("--in", solve.in, "Instance JSON")->required();
  s->add_option("--out", solve.out, "Result JSON (stdout when omitted)");
  add_train_flags(s, solve.flags, true);

  QcedArgs qced;
  auto* q = app.add_subcommand("qced-solve", "Train the encoder-annealer-decoder solver");
  q->add_option("--in", qced.in, "Instance JSON")->required();
  q->add_option("--out", qced.out, "Result JSON (stdout when omitted)");
  q->add_option("--report", qced.report, "Per-iteration layer activeness CSV");
  add_train_flags(q, qced.flags, false);

  OracleArgs orc;
  auto* o = app.add_subcommand("oracle", "Exact minimum by enumeration");
  o->add_option("--in", orc.in, "Instance JSON")->required();
  o->add_option("--spectrum", orc.spectrum, "Also list the K lowest levels");
  o->add_option("--out", orc.out, "Result JSON (stdout when omitted)");

  BenchArgs bench;
  auto* b = app.add_subcommand("bench", "Run a solver over a dataset and write CSV records");
  b->add_option("--dir", bench.dir, "Directory of instance JSON files")->check(CLI::ExistingDirectory);
  b->add_option("--class", bench.cls, "Generate instances of this class instead")->check(CLI::IsMember(classes));
  b->add_option("--n", bench.n, "Generated instance size");
  b->add_option("--count", bench.count, "Generated instance count");
  b->add_option("--instance-seed", bench.instance_seed, "First generated instance seed");
  b->add_option("--solver", bench.solver, "fnn or qced")->check(CLI::IsMember({"fnn", "qced"}));
  b->add_option("--workers", bench.workers, "Worker threads (QFNN_WORKERS takes precedence)");
  b->add_option("--out-dir", bench.out_dir, "Directory for CSV output");
  add_train_flags(b, bench.flags, true);

  GradCheckArgs gc;
  auto* c = app.add_subcommand("grad-check", "Finite-difference vs parameter-shift gradients over lambda*dt");
  c->add_option("--grid", gc.grid, "lambda*dt values")->delimiter(',');
  c->add_option("--trotter-n", gc.trotter_n, "Trotter number")->check(CLI::PositiveNumber);
  c->add_option("--eps", gc.eps, "Finite-difference step");
  c->add_option("--out", gc.out, "CSV path (stdout when omitted)");

  PowerScanArgs ps;
  auto* p = app.add_subcommand("power-scan", "Error and entropy versus the diagonal exponent");
  p->add_option("--class", ps.cls, "Problem class")->check(CLI::IsMember(classes));
  p->add_option("--n", ps.n, "Instance size");
  p->add_option("--count", ps.count, "Instances in the suite");
  p->add_option("--instance-seed", ps.instance_seed, "First instance seed");
  p->add_option("--powers", ps.powers, "Exponents to scan")->delimiter(',');
  p->add_option("--workers", ps.workers, "Worker threads (QFNN_WORKERS takes precedence)");
  p->add_option("--out", ps.out, "CSV path (stdout when omitted)");
  add_train_flags(p, ps.flags, false);

  CLI11_PARSE(app, argc, argv);
  try {
    const Settings settings = load_config(config_path);
    if (*g) return run_generate(gen);
    if (*s) return run_solve(solve, settings);
    if (*q) return run_qced(qced, settings);
    if (*o) return run_oracle(orc);
    if (*b) return run_bench(bench, settings);
    if (*c) return run_grad_check(gc);
    if (*p) return run_power_scan(ps, settings);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
