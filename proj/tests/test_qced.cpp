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
#include "qfnn/qced.hpp"
#include "test_util.hpp"

namespace qfnn {
namespace {

// Small couplings keep the encoder sigmoids away from saturation.
QuboInstance micro_instance(std::uint64_t seed) { return testing::random_instance(4, 10 + seed, 0.5); }

QcedConfig fast_config(int iterations, std::uint64_t seed = 0) {
  QcedConfig cfg;
  cfg.iterations = iterations;
  cfg.seed = seed;
  cfg.presample_rounds = 2;
  cfg.presample_epochs = 1;
  cfg.annealer = RydbergConfig::chain(2);
  return cfg;
}

TEST(QcedModel, Shapes) {
  const auto m = build_qced(15, RydbergConfig::square());
  ASSERT_EQ(m.encoder.layers.size(), 3u);
  EXPECT_EQ(m.encoder.input_width(), 120);
  EXPECT_EQ(m.encoder.layers[0].fan_out(), 132);
  EXPECT_EQ(m.encoder.layers[1].fan_out(), 132);
  EXPECT_EQ(m.encoder.output_width(), 12);
  EXPECT_EQ(m.encoder.layers[2].activation, Activation::kSigmoid);
  EXPECT_EQ(m.decoder.input_width(), 4);
  EXPECT_EQ(m.decoder.layers[0].fan_out(), 19);
  EXPECT_EQ(m.decoder.output_width(), 15);
  EXPECT_EQ(m.decoder.output_map, OutputMap::kUnitInterval);
  EXPECT_EQ(qced_layer_names(m).front(), "encoder.0");
  EXPECT_EQ(qced_layer_names(m).back(), "decoder.2");
}

TEST(QcedModel, FlattenIsRowMajorUpperTriangle) {
  Matrix q(3, 3);
  q << 1, 2, 3, 2, 4, 5, 3, 5, 6;
  const Vector v = flatten_upper(QuboInstance::make(q));
  Vector expect(6);
  expect << 1, 2, 3, 4, 5, 6;
  EXPECT_EQ(v, expect);
}

TEST(QcedForward, ZeroEncoderGivesMidpointLasers) {
  auto m = make_qced(4, RydbergConfig::chain(2), 3);
  for (auto& layer : m.encoder.layers) {
    layer.W.setZero();
    layer.b.setZero();
  }
  QcedCache cache;
  const Vector a = qced_forward(m, micro_instance(0), &cache);
  EXPECT_EQ(cache.encoded, Vector::Constant(6, 0.5));
  const auto& s = cache.schedule;
  for (int j = 0; j < 2; ++j) {
    EXPECT_DOUBLE_EQ(s.omega[j + 1], 0.5 * m.annealer.omega_max);
    EXPECT_EQ(s.delta0[j], 0.0);
    EXPECT_EQ(s.slope[j], 0.0);
  }
  EXPECT_EQ(qced_forward(m, micro_instance(1)), a);
}

TEST(QcedForward, OutputInUnitBoxAndDeterministic) {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const auto m = make_qced(4, RydbergConfig::chain(2), seed);
    const Vector a = qced_forward(m, micro_instance(seed));
    EXPECT_GE(a.minCoeff(), 0.0);
    EXPECT_LE(a.maxCoeff(), 1.0);
    EXPECT_EQ(qced_forward(m, micro_instance(seed)), a);
  }
}

TEST(QcedForward, SizeMismatchThrows) {
  const auto m = make_qced(4, RydbergConfig::chain(2), 0);
  EXPECT_THROW(qced_forward(m, testing::random_instance(5, 1)), Error);
}

TEST(QcedBackward, ZeroUpstreamGivesZeroGradients) {
  const auto m = make_qced(4, RydbergConfig::chain(2), 1);
  QcedCache cache;
  qced_forward(m, micro_instance(0), &cache);
  const auto g = qced_backward(m, cache, Vector::Zero(4));
  for (const auto& d : g.encoder.dW) EXPECT_EQ(d.cwiseAbs().maxCoeff(), 0.0);
  for (const auto& d : g.decoder.dW) EXPECT_EQ(d.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(g.d_laser.cwiseAbs().maxCoeff(), 0.0);
}

TEST(QcedBackward, EvolutionCountAtFourAtoms) {
  const auto m = make_qced(3, RydbergConfig::square(), 1);
  QcedCache cache;
  qced_forward(m, testing::random_instance(3, 2, 0.5), &cache);
  EXPECT_EQ(qced_backward(m, cache, Vector::Ones(3)).evolutions, 24);
}

// One weight per encoder layer, the one with the largest analytic gradient,
// against a central difference of the whole pipeline.
TEST(QcedBackward, EndToEndEncoderGradient) {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const auto inst = micro_instance(seed);
    auto m = make_qced(4, RydbergConfig::chain(2), seed);
    QcedCache cache;
    const Vector x = qced_forward(m, inst, &cache);
    const auto g = qced_backward(m, cache, loss_gradient(inst, x));
    for (std::size_t l = 0; l < m.encoder.layers.size(); ++l) {
      Eigen::Index r, c;
      g.encoder.dW[l].cwiseAbs().maxCoeff(&r, &c);
      auto& w = m.encoder.layers[l].W(r, c);
      const double keep = w, h = 1e-4;
      w = keep + h;
      const double up = relaxed_loss(inst, qced_forward(m, inst));
      w = keep - h;
      const double down = relaxed_loss(inst, qced_forward(m, inst));
      w = keep;
      const double fd = (up - down) / (2 * h);
      EXPECT_LE(std::abs(g.encoder.dW[l](r, c) - fd), 1e-2 * std::abs(fd)) << "seed " << seed << " layer " << l;
    }
  }
}

TEST(Activeness, ClosedForms) {
  ParameterSnapshot a{Vector::Constant(3, 2.0), Vector::Constant(2, -1.0)};
  ParameterSnapshot b{Vector::Constant(3, 4.0), Vector::Constant(2, -1.0)};
  const auto r = layer_activeness({a, a, b}, {"x", "y"});
  ASSERT_EQ(r.iterations(), 2);
  EXPECT_EQ(r.percent[0][0], 0.0);
  EXPECT_EQ(r.percent[0][1], 0.0);
  EXPECT_NEAR(r.percent[1][0], 100.0, 1e-9);
  EXPECT_EQ(r.percent[1][1], 0.0);
  EXPECT_NEAR(r.layer_mean(0), 50.0, 1e-9);
  EXPECT_NEAR(r.group_mean("x"), 50.0, 1e-9);
  EXPECT_THROW(layer_activeness({a}), Error);
}

TEST(Activeness, FrozenEncoderReportsZero) {
  const auto inst = micro_instance(2);
  auto m = make_qced(4, RydbergConfig::chain(2), 2);
  std::vector<ParameterSnapshot> history{snapshot(m)};
  for (int k = 0; k < 3; ++k) {
    QcedCache cache;
    const Vector x = qced_forward(m, inst, &cache);
    const auto g = qced_backward(m, cache, loss_gradient(inst, x));
    sgd_step(m.decoder, g.decoder, 0.03);
    history.push_back(snapshot(m));
  }
  const auto r = layer_activeness(history, qced_layer_names(m));
  for (const auto& row : r.percent) {
    for (int l = 0; l < 3; ++l) EXPECT_EQ(row[l], 0.0);
    EXPECT_GT(row[3] + row[4] + row[5], 0.0);
  }
  EXPECT_EQ(r.group_mean("encoder"), 0.0);
}

TEST(TrainQced, ZeroIterations) {
  const auto inst = micro_instance(0);
  const auto out = train_qced(inst, fast_config(0));
  EXPECT_TRUE(out.activeness.empty());
  EXPECT_EQ(out.result.loss_trace.size(), 1u);
  EXPECT_EQ(out.result.solution.binary.size(), 4u);
}

TEST(TrainQced, ActivenessCoversFirstIterations) {
  const auto inst = micro_instance(1);
  EXPECT_EQ(train_qced(inst, fast_config(5)).activeness.iterations(), 5);
  auto cfg = fast_config(23);
  cfg.presample_rounds = 1;
  cfg.presample_epochs = 0;
  const auto out = train_qced(inst, cfg);
  EXPECT_EQ(out.activeness.iterations(), 20);
  EXPECT_EQ(out.activeness.layers.size(), 6u);
  EXPECT_EQ(out.result.loss_trace.size(), 24u);
  EXPECT_EQ(out.evolutions, 23 * 12);
}

TEST(TrainQced, Deterministic) {
  const auto inst = micro_instance(2);
  const auto a = train_qced(inst, fast_config(4, 7));
  const auto b = train_qced(inst, fast_config(4, 7));
  EXPECT_EQ(a.result.loss_trace, b.result.loss_trace);
  EXPECT_EQ(a.activeness.percent, b.activeness.percent);
  EXPECT_EQ(a.chosen_round, b.chosen_round);
}

TEST(TrainQced, FifteenNodeSmoke) {
  const auto inst = gen_maxcut(15, 3);
  QcedConfig cfg;
  cfg.iterations = 100;
  cfg.presample_rounds = 1;
  cfg.presample_epochs = 0;
  cfg.seed = 3;
  const auto out = train_qced(inst, cfg);
  EXPECT_FALSE(out.result.diverged) << out.result.diagnostic;
  EXPECT_EQ(out.result.loss_trace.size(), 101u);
  for (double v : out.result.loss_trace) EXPECT_TRUE(std::isfinite(v));
}

}  // namespace
}  // namespace qfnn
