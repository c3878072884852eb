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

#ifndef LEXSEQ_TRAINER_ADAM_H_
#define LEXSEQ_TRAINER_ADAM_H_

#include <cstdint>
#include <span>
#include <string_view>

#include "lexseq/nn/bilstm.h"

namespace lexseq {

struct AdamHyperparams {
  double learning_rate = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-7;
};

// First and second moments shaped like every parameter, plus the number of
// updates applied so far.
struct AdamState {
  AdamState() = default;
  explicit AdamState(const ModelDims& dims)
      : first_moment(dims), second_moment(dims) {}

  bool operator==(const AdamState&) const = default;

  BiLstmParams<float> first_moment;
  BiLstmParams<float> second_moment;
  uint64_t step = 0;
};

// One bias-corrected Adam update of a flat tensor at step `step` (>= 1):
//   m = b1 m + (1 - b1) g;  v = b2 v + (1 - b2) g^2
//   theta -= lr * (m / (1 - b1^t)) / (sqrt(v / (1 - b2^t)) + eps)
void AdamUpdateTensor(std::span<float> params, std::span<const float> grads,
                      std::span<float> first_moment,
                      std::span<float> second_moment, uint64_t step,
                      const AdamHyperparams& hyper);

// Increments state.step and updates every parameter tensor. Embedding rows
// without a gradient still see their moments decay. Throws NumericError
// naming the tensor before touching anything if a gradient is not finite.
void AdamUpdate(BiLstmClassifier<float>& model, const Gradients<float>& grads,
                AdamState& state, const AdamHyperparams& hyper);

}  // namespace lexseq

#endif  // LEXSEQ_TRAINER_ADAM_H_
