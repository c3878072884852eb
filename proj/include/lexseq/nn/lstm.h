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

#ifndef LEXSEQ_NN_LSTM_H_
#define LEXSEQ_NN_LSTM_H_

#include <span>
#include <string_view>
#include <vector>

#include "lexseq/nn/tensor.h"

namespace lexseq {

// Where the rectifier sits in the recurrent layer.
//   kRelu:      ReLU is both the candidate activation and the cell-output
//               activation (tanh is not used anywhere).
//   kTanh:      classic tanh cells, no rectifier.
//   kReluMerge: tanh cells; ReLU applied to the summed direction outputs.
enum class CellActivation { kRelu, kTanh, kReluMerge };

std::string_view ActivationName(CellActivation activation);
CellActivation ParseActivation(std::string_view name);

// True when the cell itself uses ReLU in place of tanh.
inline bool CellUsesRelu(CellActivation activation) {
  return activation == CellActivation::kRelu;
}

// One LSTM direction. Rows of the weight matrices and the bias are laid out
// in four gate blocks of `hidden` rows: input i, forget f, candidate g,
// output o.
template <typename T>
struct LstmDirectionParams {
  LstmDirectionParams() = default;
  LstmDirectionParams(size_t input_dim, size_t hidden)
      : input_weights(4 * hidden, input_dim),
        recurrent_weights(4 * hidden, hidden),
        bias(4 * hidden, 1) {}

  size_t hidden() const { return recurrent_weights.cols(); }
  size_t input_dim() const { return input_weights.cols(); }

  void SetZero() {
    input_weights.SetZero();
    recurrent_weights.SetZero();
    bias.SetZero();
  }

  template <typename U>
  LstmDirectionParams<U> Cast() const {
    LstmDirectionParams<U> out;
    out.input_weights = input_weights.template Cast<U>();
    out.recurrent_weights = recurrent_weights.template Cast<U>();
    out.bias = bias.template Cast<U>();
    return out;
  }

  bool operator==(const LstmDirectionParams&) const = default;

  Tensor2D<T> input_weights;
  Tensor2D<T> recurrent_weights;
  Tensor2D<T> bias;
};

template <typename T>
struct LstmStepCache {
  std::vector<T> x;
  std::vector<T> h_prev;
  std::vector<T> c_prev;
  std::vector<T> pre;       // z = W x + U h_prev + b, 4*hidden
  std::vector<T> gates;     // [i, f, g, o] after their activations
  std::vector<T> c;
  std::vector<T> cell_out;  // phi(c)
  std::vector<T> h;
};

template <typename T>
struct LstmStepResult {
  std::vector<T> h;
  std::vector<T> c;
  LstmStepCache<T> cache;
};

//   i = sigmoid(z_i)  f = sigmoid(z_f)  o = sigmoid(z_o)  g = phi(z_g)
//   c = f * c_prev + i * g
//   h = o * phi(c)
// with phi = ReLU for kRelu and tanh otherwise. `timestep` only labels the
// error raised for non-finite results.
template <typename T>
LstmStepResult<T> LstmStep(std::span<const T> x, std::span<const T> h_prev,
                           std::span<const T> c_prev,
                           const LstmDirectionParams<T>& params,
                           CellActivation activation = CellActivation::kRelu,
                           size_t timestep = 0);

template <typename T>
struct LstmStepInputGradients {
  std::vector<T> x;
  std::vector<T> h_prev;
  std::vector<T> c_prev;
};

// Given dL/dh and dL/dc for one step, adds the parameter gradients to
// `grads` and returns the gradients for the step inputs.
template <typename T>
LstmStepInputGradients<T> LstmStepBackward(
    const LstmStepCache<T>& cache, std::span<const T> dh,
    std::span<const T> dc, const LstmDirectionParams<T>& params,
    CellActivation activation, LstmDirectionParams<T>& grads);

}  // namespace lexseq

#endif  // LEXSEQ_NN_LSTM_H_
