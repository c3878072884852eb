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
#include <string>
#include <vector>

#include "lexseq/common/error.h"

namespace lexseq {
namespace {

void CheckFinite(std::span<const float> values, std::string_view name) {
  for (float v : values) {
    if (!std::isfinite(v)) {
      throw NumericError("non-finite gradient in " + std::string(name));
    }
  }
}

}  // namespace

void AdamUpdateTensor(std::span<float> params, std::span<const float> grads,
                      std::span<float> first_moment,
                      std::span<float> second_moment, uint64_t step,
                      const AdamHyperparams& hyper) {
  if (grads.size() != params.size() || first_moment.size() != params.size() ||
      second_moment.size() != params.size()) {
    throw Error("adam: tensor sizes differ");
  }
  if (step == 0) throw Error("adam: step counter must be >= 1");
  const double t = static_cast<double>(step);
  const float b1 = static_cast<float>(hyper.beta1);
  const float b2 = static_cast<float>(hyper.beta2);
  const float correction1 = static_cast<float>(1.0 - std::pow(hyper.beta1, t));
  const float correction2 = static_cast<float>(1.0 - std::pow(hyper.beta2, t));
  const float lr = static_cast<float>(hyper.learning_rate);
  const float eps = static_cast<float>(hyper.epsilon);
  for (size_t k = 0; k < params.size(); ++k) {
    const float g = grads[k];
    first_moment[k] = b1 * first_moment[k] + (1.0f - b1) * g;
    second_moment[k] = b2 * second_moment[k] + (1.0f - b2) * g * g;
    const float m_hat = first_moment[k] / correction1;
    const float v_hat = second_moment[k] / correction2;
    params[k] -= lr * m_hat / (std::sqrt(v_hat) + eps);
  }
}

void AdamUpdate(BiLstmClassifier<float>& model, const Gradients<float>& grads,
                AdamState& state, const AdamHyperparams& hyper) {
  const ModelDims& dims = model.dims();
  if (!(grads.dims == dims) ||
      state.first_moment.embedding.rows() != dims.vocab_rows) {
    throw Error("adam: state or gradients do not match the model");
  }
  for (const auto& [id, row] : grads.embedding_rows) {
    CheckFinite(row, "embedding");
  }
  const std::array<std::pair<std::string_view, const Tensor2D<float>*>, 8>
      dense_grads = {{{"forward.W", &grads.forward_dir.input_weights},
                      {"forward.U", &grads.forward_dir.recurrent_weights},
                      {"forward.b", &grads.forward_dir.bias},
                      {"backward.W", &grads.backward_dir.input_weights},
                      {"backward.U", &grads.backward_dir.recurrent_weights},
                      {"backward.b", &grads.backward_dir.bias},
                      {"dense.W", &grads.head.weights},
                      {"dense.b", &grads.head.bias}}};
  for (const auto& [name, tensor] : dense_grads) {
    CheckFinite(tensor->values(), name);
  }

  state.step += 1;
  auto params = ParameterTensors(model.params());
  auto m = ParameterTensors(state.first_moment);
  auto v = ParameterTensors(state.second_moment);

  // Embedding, row by row; absent rows have a zero gradient.
  const std::vector<float> zero_row(dims.embed_dim, 0.0f);
  for (size_t r = 0; r < dims.vocab_rows; ++r) {
    auto it = grads.embedding_rows.find(static_cast<int32_t>(r));
    std::span<const float> g =
        it == grads.embedding_rows.end() ? std::span<const float>(zero_row)
                                         : std::span<const float>(it->second);
    AdamUpdateTensor(params[0].tensor->row(r), g, m[0].tensor->row(r),
                     v[0].tensor->row(r), state.step, hyper);
  }
  for (size_t k = 1; k < params.size(); ++k) {
    AdamUpdateTensor(params[k].tensor->values(), dense_grads[k - 1].second->values(),
                     m[k].tensor->values(), v[k].tensor->values(), state.step,
                     hyper);
  }
}

}  // namespace lexseq
