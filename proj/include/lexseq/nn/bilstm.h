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

#ifndef LEXSEQ_NN_BILSTM_H_
#define LEXSEQ_NN_BILSTM_H_

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include "lexseq/nn/lstm.h"
#include "lexseq/nn/tensor.h"
#include "lexseq/tokenizer/tokenizer.h"

namespace lexseq {

struct ModelDims {
  size_t vocab_rows = 0;  // vocabulary entries + PAD + OOV
  size_t embed_dim = 100;
  size_t hidden = 200;
  size_t classes = 6;

  void Validate() const;
  bool operator==(const ModelDims&) const = default;
};

// vocab_rows*E + 2*(4H(E+H) + 4H) + (C*H + C)
size_t ParameterCount(const ModelDims& dims);

// Settings the model was trained under, carried into checkpoints so that
// inference reproduces the same input pipeline.
struct ModelMetadata {
  std::vector<std::string> labels;
  size_t max_sequence_length = 1000;
  bool lowercase = true;
  std::string vocabulary_digest;
  // Split used for training, when known.
  std::optional<uint64_t> split_seed;
  std::array<double, 3> split_ratios = {0.7, 0.2, 0.1};

  bool operator==(const ModelMetadata&) const = default;
};

template <typename T>
struct DenseParams {
  DenseParams() = default;
  DenseParams(size_t inputs, size_t outputs)
      : weights(outputs, inputs), bias(outputs, 1) {}

  bool operator==(const DenseParams&) const = default;

  Tensor2D<T> weights;  // (classes, hidden)
  Tensor2D<T> bias;     // (classes, 1)
};

template <typename T>
struct BiLstmParams {
  BiLstmParams() = default;
  explicit BiLstmParams(const ModelDims& dims)
      : embedding(dims.vocab_rows, dims.embed_dim),
        forward_dir(dims.embed_dim, dims.hidden),
        backward_dir(dims.embed_dim, dims.hidden),
        head(dims.hidden, dims.classes) {}

  bool operator==(const BiLstmParams&) const = default;

  Tensor2D<T> embedding;  // (vocab_rows, embed_dim)
  LstmDirectionParams<T> forward_dir;
  LstmDirectionParams<T> backward_dir;
  DenseParams<T> head;
};

template <typename Tensor>
struct NamedTensor {
  std::string_view name;
  Tensor* tensor;
};

// The nine parameter tensors in checkpoint order: embedding, forward W/U/b,
// backward W/U/b, dense W/b.
template <typename Params>
auto ParameterTensors(Params& params) {
  using Tensor = std::conditional_t<std::is_const_v<Params>,
                                    const decltype(params.embedding),
                                    decltype(params.embedding)>;
  return std::array<NamedTensor<Tensor>, 9>{{
      {"embedding", &params.embedding},
      {"forward.W", &params.forward_dir.input_weights},
      {"forward.U", &params.forward_dir.recurrent_weights},
      {"forward.b", &params.forward_dir.bias},
      {"backward.W", &params.backward_dir.input_weights},
      {"backward.U", &params.backward_dir.recurrent_weights},
      {"backward.b", &params.backward_dir.bias},
      {"dense.W", &params.head.weights},
      {"dense.b", &params.head.bias}}};
}

// Embedding -> forward and backward LSTM -> sum of final hidden states ->
// dense softmax head.
template <typename T>
class BiLstmClassifier {
 public:
  explicit BiLstmClassifier(const ModelDims& dims,
                            CellActivation activation = CellActivation::kRelu);

  const ModelDims& dims() const { return dims_; }
  CellActivation activation() const { return activation_; }

  BiLstmParams<T>& params() { return params_; }
  const BiLstmParams<T>& params() const { return params_; }

  ModelMetadata& metadata() { return metadata_; }
  const ModelMetadata& metadata() const { return metadata_; }

  template <typename U>
  BiLstmClassifier<U> Cast() const {
    BiLstmClassifier<U> out(dims_, activation_);
    out.params().embedding = params_.embedding.template Cast<U>();
    out.params().forward_dir = params_.forward_dir.template Cast<U>();
    out.params().backward_dir = params_.backward_dir.template Cast<U>();
    out.params().head.weights = params_.head.weights.template Cast<U>();
    out.params().head.bias = params_.head.bias.template Cast<U>();
    out.metadata() = metadata_;
    return out;
  }

  bool operator==(const BiLstmClassifier&) const = default;

 private:
  ModelDims dims_;
  CellActivation activation_;
  BiLstmParams<T> params_;
  ModelMetadata metadata_;
};

template <typename T>
size_t ParameterCount(const BiLstmClassifier<T>& model);

// Glorot-uniform embedding and weight matrices (limit sqrt(6/(rows+cols))),
// drawn in checkpoint order from one SplitMix64 stream; zero biases except
// the forget-gate block, which is 1.
template <typename T>
BiLstmClassifier<T> InitParameters(
    const ModelDims& dims, uint64_t seed,
    CellActivation activation = CellActivation::kRelu);

// Glorot limit for a (rows x cols) matrix.
double GlorotLimit(size_t rows, size_t cols);

template <typename T>
using Matrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;

// Per-direction caches; column t is the t-th step in processing order.
template <typename T>
struct DirectionTrace {
  Matrix<T> inputs;    // (E, L)
  Matrix<T> pre;       // (4H, L)
  Matrix<T> gates;     // (4H, L)
  Matrix<T> cells;     // (H, L)
  Matrix<T> cell_out;  // (H, L)
  Matrix<T> hidden;    // (H, L)
};

template <typename T>
struct ForwardTrace {
  ModelDims dims;
  CellActivation activation = CellActivation::kRelu;
  std::vector<int32_t> ids;  // the non-PAD prefix, original order
  std::vector<bool> mask;    // per input position: true where not PAD
  DirectionTrace<T> forward_dir;
  DirectionTrace<T> backward_dir;  // processes ids from the last to the first
  std::vector<T> merged;           // h_forward(last) + h_backward(last)
  std::vector<T> head_input;       // merged, rectified under kReluMerge
  std::vector<T> logits;
  std::vector<T> probs;

  size_t length() const { return ids.size(); }
};

template <typename T>
struct ForwardResult {
  std::vector<T> probs;
  ForwardTrace<T> trace;
};

template <typename T>
ForwardResult<T> Forward(const EncodedSequence& seq,
                         const BiLstmClassifier<T>& model);

// Numerically stable softmax (max subtracted).
template <typename T>
std::vector<T> Softmax(std::span<const T> logits);

// -ln(max(probs[target], 1e-12)).
template <typename T>
T CrossEntropyLoss(std::span<const T> probs, size_t target);

// probs - onehot(target).
template <typename T>
std::vector<T> LogitGradient(std::span<const T> probs, size_t target);

// Index of the largest probability; ties go to the lowest index.
template <typename T>
size_t Argmax(std::span<const T> probs);

// Parameter gradients. Embedding gradients are kept only for rows that a
// sequence touched; every other row is implicitly zero.
template <typename T>
struct Gradients {
  explicit Gradients(const ModelDims& dims);

  std::span<T> EmbeddingRow(int32_t id);
  std::vector<T> EmbeddingRowOrZero(int32_t id) const;
  Tensor2D<T> DenseEmbedding() const;

  void Accumulate(const Gradients& other);
  void Scale(T factor);
  void SetZero();
  double SquaredNorm() const;

  ModelDims dims;
  std::map<int32_t, std::vector<T>> embedding_rows;
  LstmDirectionParams<T> forward_dir;
  LstmDirectionParams<T> backward_dir;
  DenseParams<T> head;
};

// Exact backpropagation through time for one sequence. Adds dLoss/dparam to
// `grads`, where Loss = CrossEntropyLoss(trace.probs, target).
template <typename T>
void Backward(const ForwardTrace<T>& trace, size_t target,
              const BiLstmClassifier<T>& model, Gradients<T>& grads);

}  // namespace lexseq

#endif  // LEXSEQ_NN_BILSTM_H_
