// Copyright 2026 The Lexseq Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "lexseq/trainer/adam.h"

#include <cmath>
#include <limits>
#include <vector>

#include <gmock/gmock.h>
#include <gtest/gtest.h>

#include "lexseq/common/error.h"
#include "lexseq/common/random.h"
#include "lexseq/trainer/trainer.h"

namespace lexseq {
namespace {

using ::testing::HasSubstr;

const ModelDims kTiny = {12, 4, 3, 3};

TEST(AdamUpdateTensorTest, ScalarFirstStep) {
  std::vector<float> theta = {1.0f}, g = {0.5f}, m = {0}, v = {0};
  AdamUpdateTensor(theta, g, m, v, 1, AdamHyperparams());
  EXPECT_NEAR(theta[0], 1.0 - 0.001 * 0.5 / (0.5 + 1e-7), 1e-7);
  EXPECT_NEAR(theta[0], 0.999, 1e-6);
  EXPECT_FLOAT_EQ(m[0], 0.05f);
  EXPECT_FLOAT_EQ(v[0], (1.0f - 0.999f) * 0.25f);  // beta2 held in float
}

TEST(AdamUpdateTensorTest, ZeroGradientFreshState) {
  std::vector<float> theta = {0.3f, -2.0f}, g = {0, 0}, m = {0, 0}, v = {0, 0};
  AdamUpdateTensor(theta, g, m, v, 1, AdamHyperparams());
  EXPECT_EQ(theta, (std::vector<float>{0.3f, -2.0f}));
}

TEST(AdamUpdateTensorTest, ZeroLearningRate) {
  AdamHyperparams hyper;
  hyper.learning_rate = 0;
  std::vector<float> theta = {0.3f, -2.0f}, g = {5, -7}, m = {0, 0}, v = {0, 0};
  for (uint64_t t = 1; t <= 3; ++t) AdamUpdateTensor(theta, g, m, v, t, hyper);
  EXPECT_EQ(theta, (std::vector<float>{0.3f, -2.0f}));
}

TEST(AdamUpdateTensorTest, MatchesDoublePrecisionReference) {
  SplitMix64 rng(41);
  const size_t n = 16;
  std::vector<float> theta(n), m(n, 0), v(n, 0);
  std::vector<double> ref_theta(n), ref_m(n, 0), ref_v(n, 0);
  for (size_t i = 0; i < n; ++i) ref_theta[i] = theta[i] = float(rng.Uniform());
  const AdamHyperparams hyper;
  for (uint64_t t = 1; t <= 50; ++t) {
    std::vector<float> g(n);
    for (auto& x : g) x = static_cast<float>(2 * rng.Uniform() - 1);
    AdamUpdateTensor(theta, g, m, v, t, hyper);
    for (size_t i = 0; i < n; ++i) {
      ref_m[i] = 0.9 * ref_m[i] + 0.1 * g[i];
      ref_v[i] = 0.999 * ref_v[i] + 0.001 * g[i] * g[i];
      const double mhat = ref_m[i] / (1 - std::pow(0.9, double(t)));
      const double vhat = ref_v[i] / (1 - std::pow(0.999, double(t)));
      ref_theta[i] -= 0.001 * mhat / (std::sqrt(vhat) + 1e-7);
    }
  }
  for (size_t i = 0; i < n; ++i) EXPECT_NEAR(theta[i], ref_theta[i], 1e-5);
}

TEST(AdamUpdateTest, StepCounterAndUntouchedRowsDecay) {
  auto model = InitParameters<float>(kTiny, 1);
  AdamState state(kTiny);
  const auto before = model.params();
  Gradients<float> grads(kTiny);
  auto row = grads.EmbeddingRow(3);
  for (auto& x : row) x = 1.0f;
  AdamUpdate(model, grads, state, AdamHyperparams());
  EXPECT_EQ(state.step, 1u);
  // Row 3 moved, row 4 did not (zero gradient, zero moments).
  EXPECT_NE(model.params().embedding(3, 0), before.embedding(3, 0));
  EXPECT_EQ(model.params().embedding(4, 0), before.embedding(4, 0));
  EXPECT_FLOAT_EQ(state.first_moment.embedding(3, 0), 0.1f);

  // Second step without a gradient on row 3: its moment decays and the
  // parameter keeps moving under momentum.
  Gradients<float> empty(kTiny);
  const float after_first = model.params().embedding(3, 0);
  AdamUpdate(model, empty, state, AdamHyperparams());
  EXPECT_EQ(state.step, 2u);
  EXPECT_FLOAT_EQ(state.first_moment.embedding(3, 0), 0.09f);
  EXPECT_LT(model.params().embedding(3, 0), after_first);
}

TEST(AdamUpdateTest, ZeroGradientLeavesModelUnchanged) {
  auto model = InitParameters<float>(kTiny, 2);
  const auto before = model;
  AdamState state(kTiny);
  AdamUpdate(model, Gradients<float>(kTiny), state, AdamHyperparams());
  EXPECT_EQ(model, before);
}

TEST(AdamUpdateTest, NonFiniteGradientNamesTensor) {
  auto model = InitParameters<float>(kTiny, 3);
  const auto before = model;
  AdamState state(kTiny);
  Gradients<float> grads(kTiny);
  grads.backward_dir.recurrent_weights(1, 1) =
      std::numeric_limits<float>::quiet_NaN();
  try {
    AdamUpdate(model, grads, state, AdamHyperparams());
    FAIL() << "expected NumericError";
  } catch (const NumericError& e) {
    EXPECT_THAT(e.what(), HasSubstr("backward.U"));
  }
  EXPECT_EQ(model, before);
  EXPECT_EQ(state.step, 0u);
}

TEST(AdamUpdateTest, NonFiniteEmbeddingGradient) {
  auto model = InitParameters<float>(kTiny, 3);
  AdamState state(kTiny);
  Gradients<float> grads(kTiny);
  grads.EmbeddingRow(5)[0] = std::numeric_limits<float>::infinity();
  try {
    AdamUpdate(model, grads, state, AdamHyperparams());
    FAIL() << "expected NumericError";
  } catch (const NumericError& e) {
    EXPECT_THAT(e.what(), HasSubstr("embedding"));
  }
}

TEST(TrainConfigTest, Validation) {
  TrainConfig config;
  config.Validate();
  EXPECT_EQ(config.epochs, 20u);
  EXPECT_EQ(config.batch_size, 64u);
  EXPECT_DOUBLE_EQ(config.learning_rate, 0.001);
  EXPECT_DOUBLE_EQ(config.epsilon, 1e-7);

  config.epochs = 0;
  EXPECT_THROW(config.Validate(), ConfigError);
  config = {};
  config.batch_size = 0;
  EXPECT_THROW(config.Validate(), ConfigError);
  config = {};
  config.learning_rate = 0;
  EXPECT_THROW(config.Validate(), ConfigError);
  config = {};
  config.clip_norm = -1;
  EXPECT_THROW(config.Validate(), ConfigError);
  config = {};
  config.workers = 0;
  EXPECT_THROW(config.Validate(), ConfigError);
}

}  // namespace
}  // namespace lexseq
