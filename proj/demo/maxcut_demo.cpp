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

// Solves a small MaxCut instance with and without refinement and compares
// both answers with the exact optimum.

#include <cstdio>

#include "qfnn/qfnn.hpp"

int main() {
  using namespace qfnn;
  const auto inst = gen_maxcut(16, 3);
  const auto exact = brute_force(inst);

  SolverConfig cfg;
  cfg.train.iterations = 200;
  cfg.anneal.policy = AnnealPolicy::kBoltzmann;
  for (auto kind : {SolverKind::kFnn, SolverKind::kFnnPost}) {
    cfg.kind = kind;
    const auto out = solve_instance(inst, cfg);
    std::printf("%-9s cost %10.4f  error %6.3f%%  %.3f s\n", std::string(to_string(kind)).c_str(),
                out.solution.cost, percentage_error(out.solution.cost, exact.cost), out.wall_seconds);
  }
  std::printf("optimum   cost %10.4f  (%llu states)\n", exact.cost,
              static_cast<unsigned long long>(exact.evaluations));
  return 0;
}
