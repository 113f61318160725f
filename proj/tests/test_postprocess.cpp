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

#include "qfnn/instance_gen.hpp"
#include "qfnn/oracle.hpp"
#include "qfnn/postprocess.hpp"
#include "test_util.hpp"

namespace qfnn {
namespace {

AnnealConfig with_policy(AnnealPolicy p, std::uint64_t seed) {
  AnnealConfig cfg;
  cfg.policy = p;
  cfg.seed = seed;
  return cfg;
}

TEST(Temperature, Formula) {
  EXPECT_DOUBLE_EQ(temperature(1, 1.0, -100.0, 10), 10.0);
  EXPECT_DOUBLE_EQ(temperature(2, 1.0, -100.0, 10), 5.0);
  EXPECT_DOUBLE_EQ(temperature(10, 1.0, -100.0, 10), 1.0);
  EXPECT_EQ(temperature(3, 1.0, 0.0, 4), 0.0);
  EXPECT_THROW(temperature(0, 1.0, 1.0, 1), Error);
  EXPECT_THROW(temperature(1, 1.0, 1.0, 0), Error);
}

TEST(Policy, ParseAndPrint) {
  EXPECT_EQ(parse_anneal_policy("a"), AnnealPolicy::kRetainOnce);
  EXPECT_EQ(parse_anneal_policy("b"), AnnealPolicy::kBoltzmann);
  EXPECT_FALSE(parse_anneal_policy("c").has_value());
  EXPECT_EQ(to_string(AnnealPolicy::kBoltzmann), "b");
}

TEST(FlipDelta, MatchesFullReevaluation) {
  Rng rng(77);
  for (int t = 0; t < 1000; ++t) {
    const int n = 1 + static_cast<int>(rng.index(15));
    const auto inst = testing::random_instance(n, 5000 + t);
    Binary x = testing::random_binary(n, rng);
    const int i = static_cast<int>(rng.index(n));
    const double before = qubo_cost(inst, x);
    const double delta = flip_delta(inst, x, i);
    x[i] ^= 1;
    EXPECT_NEAR(before + delta, qubo_cost(inst, x), 1e-9);
  }
}

TEST(Refine, SeparableProblemReachesOptimum) {
  const auto inst = QuboInstance::make(-Matrix::Identity(2, 2));
  for (auto p : {AnnealPolicy::kRetainOnce, AnnealPolicy::kBoltzmann}) {
    const auto r = refine(inst, Binary{0, 0}, with_policy(p, 1));
    EXPECT_EQ(r.x, (Binary{1, 1}));
    EXPECT_EQ(r.cost, -2.0);
    EXPECT_GE(r.improvements, 2);
  }
}

TEST(Refine, GlobalOptimumIsKept) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto inst = gen_random_qubo(12, s);
    const auto opt = brute_force(inst);
    for (auto p : {AnnealPolicy::kRetainOnce, AnnealPolicy::kBoltzmann}) {
      const auto r = refine(inst, opt.optimum, with_policy(p, s));
      EXPECT_DOUBLE_EQ(r.cost, opt.cost);
    }
  }
}

TEST(Refine, NeverIncreasesCost) {
  Rng rng(9);
  for (int t = 0; t < 1000; ++t) {
    const int n = 1 + static_cast<int>(rng.index(14));
    const auto inst = testing::random_instance(n, 9000 + t);
    const Binary x0 = testing::random_binary(n, rng);
    const auto policy = t % 2 ? AnnealPolicy::kBoltzmann : AnnealPolicy::kRetainOnce;
    const auto r = refine(inst, x0, with_policy(policy, t));
    EXPECT_LE(r.cost, qubo_cost(inst, x0));
    EXPECT_EQ(r.cost, qubo_cost(inst, r.x));
    EXPECT_EQ(r.initial_cost, qubo_cost(inst, x0));
  }
}

TEST(Refine, ZeroCostStartIsGreedy) {
  // Starting from the zero vector T = 0, so no uphill move is ever kept.
  const auto inst = gen_maxcut(10, 2);
  const auto r = refine(inst, Binary(10, 0), with_policy(AnnealPolicy::kBoltzmann, 0));
  EXPECT_EQ(r.retentions, 0);
  EXPECT_LT(r.cost, 0.0);
}

TEST(Refine, DeterministicPerSeedAndPoliciesDiffer) {
  const auto inst = gen_random_qubo(14, 6);
  Rng rng(1);
  const Binary x0 = testing::random_binary(14, rng);
  const auto a1 = refine(inst, x0, with_policy(AnnealPolicy::kRetainOnce, 4));
  const auto a2 = refine(inst, x0, with_policy(AnnealPolicy::kRetainOnce, 4));
  EXPECT_EQ(a1.x, a2.x);
  EXPECT_EQ(a1.retentions, a2.retentions);
  int differ = 0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto a = refine(inst, x0, with_policy(AnnealPolicy::kRetainOnce, s));
    const auto b = refine(inst, x0, with_policy(AnnealPolicy::kBoltzmann, s));
    if (a.retentions != b.retentions) ++differ;
  }
  EXPECT_GT(differ, 0);
}

TEST(Refine, RejectsBadInput) {
  const auto inst = gen_random_qubo(3, 1);
  EXPECT_THROW(refine(inst, Binary{0, 1}, AnnealConfig{}), Error);
  EXPECT_THROW(refine(inst, Binary{0, 2, 1}, AnnealConfig{}), Error);
  AnnealConfig bad;
  bad.rounds = 0;
  EXPECT_THROW(refine(inst, Binary{0, 0, 0}, bad), Error);
}

}  // namespace
}  // namespace qfnn
