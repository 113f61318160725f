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

#include <numeric>

#include "qfnn/instance_gen.hpp"
#include "qfnn/oracle.hpp"
#include "test_util.hpp"

namespace qfnn {
namespace {

TEST(BruteForce, SmallClosedForms) {
  const auto diag = brute_force(QuboInstance::make(-Matrix::Identity(5, 5)));
  EXPECT_EQ(diag.optimum, Binary(5, 1));
  EXPECT_EQ(diag.cost, -5.0);
  EXPECT_EQ(diag.evaluations, 32u);

  Matrix q(2, 2);
  q << 1, -3, -3, 2;
  const auto two = brute_force(QuboInstance::make(q));
  EXPECT_EQ(two.optimum, (Binary{1, 1}));
  EXPECT_EQ(two.cost, -3.0);
  EXPECT_EQ(two.evaluations, 4u);
}

TEST(BruteForce, TiesResolveToLexicographicallySmallest) {
  const auto zero = brute_force(QuboInstance::make(Matrix::Zero(4, 4)));
  EXPECT_EQ(zero.optimum, Binary(4, 0));
  EXPECT_EQ(zero.optimum_count, 16u);
  Matrix w(2, 2);
  w << 0, 1, 1, 0;
  const auto cut = brute_force(maxcut_from_weights(w));
  EXPECT_EQ(cut.optimum, (Binary{0, 1}));
  EXPECT_EQ(cut.optimum_count, 2u);
}

TEST(BruteForce, GrayCodeCostsMatchDirectEvaluation) {
  const auto inst = testing::random_instance(11, 4);
  int checked = 0;
  detail::gray_enumerate(inst, [&](const Binary& x, double cost) {
    if (checked++ % 2 == 0) EXPECT_NEAR(cost, qubo_cost(inst, x), 1e-9);
  });
  EXPECT_EQ(checked, 2048);
}

TEST(BruteForce, NoVectorBeatsTheOptimum) {
  for (std::uint64_t s = 0; s < 3; ++s) {
    const auto inst = gen_random_qubo(14, s);
    const auto r = brute_force(inst);
    Rng rng(s);
    for (int t = 0; t < 10000; ++t) EXPECT_GE(qubo_cost(inst, testing::random_binary(14, rng)), r.cost);
  }
}

TEST(BruteForce, CapIsEnforced) {
  try {
    brute_force(QuboInstance::make(Matrix::Zero(25, 25)));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInvalidArgument);
    EXPECT_NE(std::string(e.what()).find("heuristic"), std::string::npos);
  }
}

TEST(Spectrum, ClosedForms) {
  const auto zero = spectrum(QuboInstance::make(Matrix::Zero(3, 3)), 5);
  ASSERT_EQ(zero.levels.size(), 1u);
  EXPECT_EQ(zero.degeneracy[0], 8u);
  EXPECT_EQ(zero.optima.size(), 8u);

  const auto diag = spectrum(QuboInstance::make(-Matrix::Identity(2, 2)), 5);
  EXPECT_EQ(diag.levels, (std::vector<double>{-2, -1, 0}));
  EXPECT_EQ(diag.degeneracy, (std::vector<std::uint64_t>{1, 2, 1}));
  EXPECT_EQ(diag.optima, (std::vector<Binary>{{1, 1}}));
}

TEST(Spectrum, LevelsAscendAndDegeneraciesSum) {
  const auto inst = gen_random_qubo(12, 42);
  const auto full = spectrum(inst, 1u << 12);
  EXPECT_EQ(std::accumulate(full.degeneracy.begin(), full.degeneracy.end(), std::uint64_t{0}), 4096u);
  for (std::size_t i = 1; i < full.levels.size(); ++i) EXPECT_GT(full.levels[i], full.levels[i - 1]);
  EXPECT_DOUBLE_EQ(full.levels[0], brute_force(inst).cost);

  const auto top = spectrum(inst, 5);
  ASSERT_EQ(top.levels.size(), 5u);
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_EQ(top.levels[i], full.levels[i]);
    EXPECT_EQ(level_index(top, top.levels[i]), i);
  }
  EXPECT_EQ(level_index(top, 1e9), 5u);
  EXPECT_EQ(level_index(top, 0.5 * (top.levels[1] + top.levels[2])), 2u);
}

TEST(Spectrum, RejectsBadArguments) {
  EXPECT_THROW(spectrum(QuboInstance::make(Matrix::Zero(2, 2)), 0), Error);
  EXPECT_THROW(spectrum(QuboInstance::make(Matrix::Zero(21, 21)), 1), Error);
}

}  // namespace
}  // namespace qfnn
