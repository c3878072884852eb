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

#include "lexseq/nn/lstm.h"

#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include <gmock/gmock.h>
#include <gtest/gtest.h>

#include "lexseq/common/error.h"
#include "lexseq/common/random.h"
#include "support/gradient_check.h"

namespace lexseq {
namespace {

using ::testing::Each;
using ::testing::HasSubstr;

const CellActivation kAllActivations[] = {
    CellActivation::kRelu, CellActivation::kTanh, CellActivation::kReluMerge};

std::vector<double> RandomVector(size_t n, SplitMix64& rng, double scale) {
  std::vector<double> v(n);
  for (auto& x : v) x = scale * (2 * rng.Uniform() - 1);
  return v;
}

LstmDirectionParams<double> RandomParams(size_t input, size_t hidden,
                                         SplitMix64& rng) {
  LstmDirectionParams<double> p(input, hidden);
  for (auto* t : {&p.input_weights, &p.recurrent_weights, &p.bias}) {
    for (auto& v : t->values()) v = 2 * rng.Uniform() - 1;
  }
  return p;
}

TEST(ActivationTest, NamesRoundTrip) {
  for (auto activation : kAllActivations) {
    EXPECT_EQ(ParseActivation(ActivationName(activation)), activation);
  }
  EXPECT_EQ(ActivationName(CellActivation::kRelu), "relu");
  EXPECT_THROW(ParseActivation("gelu"), ConfigError);
}

TEST(LstmStepTest, ZeroParametersGiveZeroState) {
  LstmDirectionParams<double> p(3, 2);
  std::vector<double> x = {0.3, -1.0, 2.0}, zero(2, 0.0);
  auto r = LstmStep<double>(x, zero, zero, p);
  EXPECT_THAT(r.c, Each(0.0));
  EXPECT_THAT(r.h, Each(0.0));
  EXPECT_DOUBLE_EQ(r.cache.gates[0], 0.5);  // i
  EXPECT_DOUBLE_EQ(r.cache.gates[2], 0.5);  // f
  EXPECT_DOUBLE_EQ(r.cache.gates[4], 0.0);  // g = relu(0)
}

TEST(LstmStepTest, ScalarHandEvaluation) {
  LstmDirectionParams<double> p(1, 1);
  std::vector<double> x = {0}, h = {0}, c = {1};
  auto r = LstmStep<double>(x, h, c, p);
  EXPECT_DOUBLE_EQ(r.c[0], 0.5);
  EXPECT_DOUBLE_EQ(r.h[0], 0.25);
}

TEST(LstmStepTest, ScalarTanhEvaluation) {
  LstmDirectionParams<double> p(1, 1);
  std::vector<double> x = {0}, h = {0}, c = {1};
  auto r = LstmStep<double>(x, h, c, p, CellActivation::kTanh);
  EXPECT_DOUBLE_EQ(r.c[0], 0.5);
  EXPECT_DOUBLE_EQ(r.h[0], 0.5 * std::tanh(0.5));
}

TEST(LstmStepTest, GateBlockOrder) {
  // A bias on one block at a time moves exactly that gate.
  LstmDirectionParams<double> p(1, 1);
  p.bias(2, 0) = 3.0;  // candidate
  std::vector<double> x = {0}, h = {0}, c = {0};
  auto r = LstmStep<double>(x, h, c, p);
  EXPECT_DOUBLE_EQ(r.cache.gates[2], 3.0);
  EXPECT_DOUBLE_EQ(r.c[0], 1.5);  // i = 0.5
  EXPECT_DOUBLE_EQ(r.h[0], 0.75);
}

TEST(LstmStepTest, ShapeMismatch) {
  LstmDirectionParams<double> p(3, 2);
  std::vector<double> x(2), h(2), c(2);
  EXPECT_THROW(LstmStep<double>(x, h, c, p), Error);
  std::vector<double> x3(3), h1(1);
  EXPECT_THROW(LstmStep<double>(x3, h1, c, p), Error);
}

TEST(LstmStepTest, NonFiniteNamesTimestep) {
  LstmDirectionParams<float> p(1, 1);
  p.bias(2, 0) = std::numeric_limits<float>::infinity();
  std::vector<float> x = {0}, h = {0}, c = {0};
  try {
    LstmStep<float>(x, h, c, p, CellActivation::kRelu, 17);
    FAIL() << "expected NumericError";
  } catch (const NumericError& e) {
    EXPECT_THAT(e.what(), HasSubstr("timestep 17"));
  }
}

// L = a.h + b.c for fixed random a, b; the backward pass with dh = a and
// dc = b must match central differences of L over every parameter and input.
class LstmStepGradientTest
    : public ::testing::TestWithParam<CellActivation> {};

TEST_P(LstmStepGradientTest, MatchesFiniteDifferences) {
  const CellActivation activation = GetParam();
  const size_t E = 3, H = 4;
  double worst = 0;
  for (uint64_t seed = 0; seed < 20; ++seed) {
    SplitMix64 rng(seed);
    auto p = RandomParams(E, H, rng);
    auto x = RandomVector(E, rng, 1), h = RandomVector(H, rng, 1),
         c = RandomVector(H, rng, 1);
    auto a = RandomVector(H, rng, 1), b = RandomVector(H, rng, 1);
    auto objective = [&] {
      auto r = LstmStep<double>(x, h, c, p, activation);
      double total = 0;
      for (size_t k = 0; k < H; ++k) total += a[k] * r.h[k] + b[k] * r.c[k];
      return total;
    };
    LstmDirectionParams<double> grads(E, H);
    auto step = LstmStep<double>(x, h, c, p, activation);
    auto inputs = LstmStepBackward<double>(step.cache, a, b, p, activation,
                                           grads);
    auto check = [&](std::span<double> values, std::span<const double> g) {
      auto numeric = testing::NumericalGradient(objective, values, 1e-5);
      worst = std::max(worst, testing::RelativeError(g, numeric));
    };
    check(p.input_weights.values(), grads.input_weights.values());
    check(p.recurrent_weights.values(), grads.recurrent_weights.values());
    check(p.bias.values(), grads.bias.values());
    check(x, inputs.x);
    check(h, inputs.h_prev);
    check(c, inputs.c_prev);
  }
  EXPECT_LT(worst, 1e-6);
}

INSTANTIATE_TEST_SUITE_P(
    Activations, LstmStepGradientTest, ::testing::ValuesIn(kAllActivations),
    [](const auto& info) {
      std::string name(ActivationName(info.param));
      std::erase(name, '-');
      return name;
    });

TEST(LstmStepBackwardTest, AccumulatesIntoGradients) {
  SplitMix64 rng(3);
  auto p = RandomParams(2, 2, rng);
  auto x = RandomVector(2, rng, 1), h = RandomVector(2, rng, 1),
       c = RandomVector(2, rng, 1), dh = RandomVector(2, rng, 1),
       dc = RandomVector(2, rng, 1);
  auto step = LstmStep<double>(x, h, c, p);
  LstmDirectionParams<double> once(2, 2), twice(2, 2);
  LstmStepBackward<double>(step.cache, dh, dc, p, CellActivation::kRelu, once);
  LstmStepBackward<double>(step.cache, dh, dc, p, CellActivation::kRelu, twice);
  LstmStepBackward<double>(step.cache, dh, dc, p, CellActivation::kRelu, twice);
  for (size_t i = 0; i < once.bias.values().size(); ++i) {
    EXPECT_DOUBLE_EQ(twice.bias.values()[i], 2 * once.bias.values()[i]);
  }
}

}  // namespace
}  // namespace lexseq
