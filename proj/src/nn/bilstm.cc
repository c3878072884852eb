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

#include "lexseq/nn/bilstm.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "lexseq/common/error.h"
#include "lexseq/common/random.h"
#include "nn/cell.h"

namespace lexseq {
namespace {

template <typename T>
using Vector = Eigen::Matrix<T, Eigen::Dynamic, 1>;
template <typename T>
using VectorMap = Eigen::Map<Vector<T>>;
template <typename T>
using ConstVectorMap = Eigen::Map<const Vector<T>>;

template <typename T>
ConstVectorMap<T> AsVector(const std::vector<T>& v) {
  return {v.data(), static_cast<Eigen::Index>(v.size())};
}

template <typename T>
ConstVectorMap<T> AsVector(const Tensor2D<T>& t) {
  return {t.data(), static_cast<Eigen::Index>(t.size())};
}

// Runs one LSTM direction over `ids` (already in processing order).
template <typename T>
void RunDirection(const std::vector<int32_t>& ids, const Tensor2D<T>& embedding,
                  const LstmDirectionParams<T>& p, bool relu,
                  std::string_view direction, DirectionTrace<T>& trace) {
  const auto L = static_cast<Eigen::Index>(ids.size());
  const auto E = static_cast<Eigen::Index>(p.input_dim());
  const size_t H = p.hidden();
  const auto Hi = static_cast<Eigen::Index>(H);

  trace.inputs.resize(E, L);
  for (Eigen::Index t = 0; t < L; ++t) {
    auto row = embedding.row(static_cast<size_t>(ids[static_cast<size_t>(t)]));
    trace.inputs.col(t) = ConstVectorMap<T>(row.data(), E);
  }
  trace.pre.noalias() = p.input_weights.matrix() * trace.inputs;
  trace.pre.colwise() += AsVector(p.bias);
  trace.gates.resize(4 * Hi, L);
  trace.cells.resize(Hi, L);
  trace.cell_out.resize(Hi, L);
  trace.hidden.resize(Hi, L);

  const std::vector<T> zeros(H, T(0));
  for (Eigen::Index t = 0; t < L; ++t) {
    const T* c_prev = zeros.data();
    if (t > 0) {
      trace.pre.col(t).noalias() +=
          p.recurrent_weights.matrix() * trace.hidden.col(t - 1);
      c_prev = trace.cells.col(t - 1).data();
    }
    if (!internal::CellForward(trace.pre.col(t).data(), c_prev, H, relu,
                               trace.gates.col(t).data(),
                               trace.cells.col(t).data(),
                               trace.cell_out.col(t).data(),
                               trace.hidden.col(t).data())) {
      throw NumericError("non-finite LSTM state in " + std::string(direction) +
                         " direction at timestep " + std::to_string(t));
    }
  }
}

// Backward through one direction given dL/dh at its final step.
template <typename T>
void BackpropDirection(const std::vector<int32_t>& ids,
                       const DirectionTrace<T>& trace,
                       const LstmDirectionParams<T>& p, bool relu,
                       const Vector<T>& d_last, LstmDirectionParams<T>& grads,
                       Gradients<T>& all_grads) {
  const auto L = static_cast<Eigen::Index>(ids.size());
  const size_t H = p.hidden();
  const auto Hi = static_cast<Eigen::Index>(H);

  Matrix<T> d_pre(4 * Hi, L);
  Vector<T> dh = d_last;
  Vector<T> dc = Vector<T>::Zero(Hi);
  Vector<T> dc_prev(Hi);
  const std::vector<T> zeros(H, T(0));
  for (Eigen::Index t = L - 1; t >= 0; --t) {
    const T* c_prev = t > 0 ? trace.cells.col(t - 1).data() : zeros.data();
    internal::CellBackward(trace.pre.col(t).data(), trace.gates.col(t).data(),
                           c_prev, trace.cells.col(t).data(),
                           trace.cell_out.col(t).data(), dh.data(), dc.data(),
                           H, relu, d_pre.col(t).data(), dc_prev.data());
    if (t > 0) {
      dh.noalias() = p.recurrent_weights.matrix().transpose() * d_pre.col(t);
      dc = dc_prev;
    }
  }

  grads.input_weights.matrix().noalias() += d_pre * trace.inputs.transpose();
  if (L > 1) {
    grads.recurrent_weights.matrix().noalias() +=
        d_pre.rightCols(L - 1) * trace.hidden.leftCols(L - 1).transpose();
  }
  Vector<T> d_bias = d_pre.rowwise().sum();
  for (size_t k = 0; k < 4 * H; ++k) grads.bias[k] += d_bias[static_cast<Eigen::Index>(k)];

  Matrix<T> d_inputs = p.input_weights.matrix().transpose() * d_pre;
  const auto E = d_inputs.rows();
  for (Eigen::Index t = 0; t < L; ++t) {
    auto row = all_grads.EmbeddingRow(ids[static_cast<size_t>(t)]);
    VectorMap<T>(row.data(), E) += d_inputs.col(t);
  }
}

}  // namespace

void ModelDims::Validate() const {
  if (vocab_rows < 3) {
    throw ConfigError("model needs at least 3 embedding rows (PAD, OOV, one token)");
  }
  if (embed_dim < 1 || hidden < 1) {
    throw ConfigError("embedding and hidden sizes must be >= 1");
  }
  if (classes < 2) throw ConfigError("model needs at least 2 classes");
}

size_t ParameterCount(const ModelDims& dims) {
  const size_t E = dims.embed_dim, H = dims.hidden, C = dims.classes;
  return dims.vocab_rows * E + 2 * (4 * H * (E + H) + 4 * H) + (C * H + C);
}

template <typename T>
size_t ParameterCount(const BiLstmClassifier<T>& model) {
  size_t total = 0;
  for (const auto& named : ParameterTensors(model.params())) {
    total += named.tensor->size();
  }
  return total;
}

template <typename T>
BiLstmClassifier<T>::BiLstmClassifier(const ModelDims& dims,
                                      CellActivation activation)
    : dims_(dims), activation_(activation) {
  dims_.Validate();
  params_ = BiLstmParams<T>(dims_);
}

double GlorotLimit(size_t rows, size_t cols) {
  return std::sqrt(6.0 / static_cast<double>(rows + cols));
}

template <typename T>
BiLstmClassifier<T> InitParameters(const ModelDims& dims, uint64_t seed,
                                   CellActivation activation) {
  BiLstmClassifier<T> model(dims, activation);
  SplitMix64 rng(seed);
  auto& p = model.params();
  for (Tensor2D<T>* tensor :
       {&p.embedding, &p.forward_dir.input_weights,
        &p.forward_dir.recurrent_weights, &p.backward_dir.input_weights,
        &p.backward_dir.recurrent_weights, &p.head.weights}) {
    const double limit = GlorotLimit(tensor->rows(), tensor->cols());
    for (T& value : tensor->values()) {
      value = static_cast<T>((2.0 * rng.Uniform() - 1.0) * limit);
    }
  }
  for (auto* dir : {&p.forward_dir, &p.backward_dir}) {
    const size_t H = dims.hidden;
    for (size_t k = H; k < 2 * H; ++k) dir->bias[k] = T(1);
  }
  return model;
}

template <typename T>
std::vector<T> Softmax(std::span<const T> logits) {
  if (logits.empty()) return {};
  T max_logit = *std::max_element(logits.begin(), logits.end());
  std::vector<T> out(logits.size());
  T total = 0;
  for (size_t k = 0; k < logits.size(); ++k) {
    out[k] = std::exp(logits[k] - max_logit);
    total += out[k];
  }
  for (T& v : out) v /= total;
  return out;
}

template <typename T>
T CrossEntropyLoss(std::span<const T> probs, size_t target) {
  if (target >= probs.size()) {
    throw Error("loss: target " + std::to_string(target) +
                " out of range for " + std::to_string(probs.size()) +
                " classes");
  }
  double total = 0;
  for (T p : probs) {
    if (!(p >= T(0)) || p > T(1) + T(1e-5)) {
      throw Error("loss: probabilities must lie in [0, 1]");
    }
    total += static_cast<double>(p);
  }
  if (std::abs(total - 1.0) > 1e-5) {
    throw Error("loss: probabilities sum to " + std::to_string(total));
  }
  return -std::log(std::max(probs[target], static_cast<T>(1e-12)));
}

template <typename T>
std::vector<T> LogitGradient(std::span<const T> probs, size_t target) {
  if (target >= probs.size()) {
    throw Error("target " + std::to_string(target) + " out of range");
  }
  std::vector<T> d(probs.begin(), probs.end());
  d[target] -= T(1);
  return d;
}

template <typename T>
size_t Argmax(std::span<const T> probs) {
  size_t best = 0;
  for (size_t k = 1; k < probs.size(); ++k) {
    if (probs[k] > probs[best]) best = k;
  }
  return best;
}

template <typename T>
ForwardResult<T> Forward(const EncodedSequence& seq,
                         const BiLstmClassifier<T>& model) {
  const ModelDims& dims = model.dims();
  if (seq.length == 0) throw DataError("empty sequence");
  if (seq.length > seq.ids.size()) {
    throw DataError("sequence length exceeds its capacity");
  }
  ForwardResult<T> result;
  ForwardTrace<T>& trace = result.trace;
  trace.dims = dims;
  trace.activation = model.activation();
  trace.ids.assign(seq.ids.begin(),
                   seq.ids.begin() + static_cast<std::ptrdiff_t>(seq.length));
  for (int32_t id : trace.ids) {
    if (id < 0 || static_cast<size_t>(id) >= dims.vocab_rows) {
      throw DataError("token id " + std::to_string(id) +
                      " outside the embedding table (" +
                      std::to_string(dims.vocab_rows) + " rows)");
    }
  }
  trace.mask.assign(seq.ids.size(), false);
  std::fill(trace.mask.begin(),
            trace.mask.begin() + static_cast<std::ptrdiff_t>(seq.length), true);

  const bool relu = CellUsesRelu(model.activation());
  const auto& p = model.params();
  RunDirection(trace.ids, p.embedding, p.forward_dir, relu, "forward",
               trace.forward_dir);
  std::vector<int32_t> reversed(trace.ids.rbegin(), trace.ids.rend());
  RunDirection(reversed, p.embedding, p.backward_dir, relu, "backward",
               trace.backward_dir);

  const size_t H = dims.hidden;
  const auto last = static_cast<Eigen::Index>(seq.length) - 1;
  trace.merged.resize(H);
  trace.head_input.resize(H);
  for (size_t k = 0; k < H; ++k) {
    const auto row = static_cast<Eigen::Index>(k);
    trace.merged[k] = trace.forward_dir.hidden(row, last) +
                      trace.backward_dir.hidden(row, last);
    trace.head_input[k] = model.activation() == CellActivation::kReluMerge
                              ? std::max(trace.merged[k], T(0))
                              : trace.merged[k];
  }

  trace.logits.resize(dims.classes);
  VectorMap<T>(trace.logits.data(), static_cast<Eigen::Index>(dims.classes))
      .noalias() = p.head.weights.matrix() * AsVector(trace.head_input);
  for (size_t c = 0; c < dims.classes; ++c) trace.logits[c] += p.head.bias[c];
  for (T v : trace.logits) {
    if (!std::isfinite(v)) throw NumericError("non-finite logits");
  }
  trace.probs = Softmax<T>(trace.logits);
  result.probs = trace.probs;
  return result;
}

template <typename T>
Gradients<T>::Gradients(const ModelDims& model_dims)
    : dims(model_dims),
      forward_dir(model_dims.embed_dim, model_dims.hidden),
      backward_dir(model_dims.embed_dim, model_dims.hidden),
      head(model_dims.hidden, model_dims.classes) {}

template <typename T>
std::span<T> Gradients<T>::EmbeddingRow(int32_t id) {
  auto [it, inserted] = embedding_rows.try_emplace(id);
  if (inserted) it->second.assign(dims.embed_dim, T(0));
  return it->second;
}

template <typename T>
std::vector<T> Gradients<T>::EmbeddingRowOrZero(int32_t id) const {
  auto it = embedding_rows.find(id);
  if (it == embedding_rows.end()) return std::vector<T>(dims.embed_dim, T(0));
  return it->second;
}

template <typename T>
Tensor2D<T> Gradients<T>::DenseEmbedding() const {
  Tensor2D<T> out(dims.vocab_rows, dims.embed_dim);
  for (const auto& [id, row] : embedding_rows) {
    std::copy(row.begin(), row.end(), out.row(static_cast<size_t>(id)).begin());
  }
  return out;
}

template <typename T>
void Gradients<T>::Accumulate(const Gradients& other) {
  if (!(other.dims == dims)) throw Error("gradient shapes differ");
  for (const auto& [id, row] : other.embedding_rows) {
    auto dst = EmbeddingRow(id);
    for (size_t k = 0; k < row.size(); ++k) dst[k] += row[k];
  }
  auto add = [](Tensor2D<T>& dst, const Tensor2D<T>& src) {
    for (size_t k = 0; k < dst.size(); ++k) dst[k] += src[k];
  };
  add(forward_dir.input_weights, other.forward_dir.input_weights);
  add(forward_dir.recurrent_weights, other.forward_dir.recurrent_weights);
  add(forward_dir.bias, other.forward_dir.bias);
  add(backward_dir.input_weights, other.backward_dir.input_weights);
  add(backward_dir.recurrent_weights, other.backward_dir.recurrent_weights);
  add(backward_dir.bias, other.backward_dir.bias);
  add(head.weights, other.head.weights);
  add(head.bias, other.head.bias);
}

template <typename T>
void Gradients<T>::Scale(T factor) {
  for (auto& [id, row] : embedding_rows) {
    for (T& v : row) v *= factor;
  }
  for (Tensor2D<T>* t :
       {&forward_dir.input_weights, &forward_dir.recurrent_weights,
        &forward_dir.bias, &backward_dir.input_weights,
        &backward_dir.recurrent_weights, &backward_dir.bias, &head.weights,
        &head.bias}) {
    for (T& v : t->values()) v *= factor;
  }
}

template <typename T>
void Gradients<T>::SetZero() {
  embedding_rows.clear();
  forward_dir.SetZero();
  backward_dir.SetZero();
  head.weights.SetZero();
  head.bias.SetZero();
}

template <typename T>
double Gradients<T>::SquaredNorm() const {
  double total = 0;
  for (const auto& [id, row] : embedding_rows) {
    for (T v : row) total += static_cast<double>(v) * static_cast<double>(v);
  }
  for (const Tensor2D<T>* t :
       {&forward_dir.input_weights, &forward_dir.recurrent_weights,
        &forward_dir.bias, &backward_dir.input_weights,
        &backward_dir.recurrent_weights, &backward_dir.bias, &head.weights,
        &head.bias}) {
    for (T v : t->values()) total += static_cast<double>(v) * static_cast<double>(v);
  }
  return total;
}

template <typename T>
void Backward(const ForwardTrace<T>& trace, size_t target,
              const BiLstmClassifier<T>& model, Gradients<T>& grads) {
  const ModelDims& dims = model.dims();
  if (!(trace.dims == dims) || trace.activation != model.activation() ||
      trace.probs.size() != dims.classes || trace.ids.empty()) {
    throw Error("backward: trace was not produced by this model");
  }
  if (!(grads.dims == dims)) {
    throw Error("backward: gradient buffer does not match the model");
  }
  if (target >= dims.classes) {
    throw Error("backward: target " + std::to_string(target) +
                " out of range");
  }
  const auto& p = model.params();
  const auto C = static_cast<Eigen::Index>(dims.classes);
  const auto H = static_cast<Eigen::Index>(dims.hidden);

  std::vector<T> d_logits = LogitGradient<T>(trace.probs, target);
  auto dl = AsVector(d_logits);
  grads.head.weights.matrix().noalias() += dl * AsVector(trace.head_input).transpose();
  for (Eigen::Index c = 0; c < C; ++c) grads.head.bias[static_cast<size_t>(c)] += dl[c];

  Vector<T> d_merged = p.head.weights.matrix().transpose() * dl;
  if (model.activation() == CellActivation::kReluMerge) {
    for (Eigen::Index k = 0; k < H; ++k) {
      if (!(trace.merged[static_cast<size_t>(k)] > T(0))) d_merged[k] = T(0);
    }
  }

  const bool relu = CellUsesRelu(model.activation());
  BackpropDirection(trace.ids, trace.forward_dir, p.forward_dir, relu, d_merged,
                    grads.forward_dir, grads);
  std::vector<int32_t> reversed(trace.ids.rbegin(), trace.ids.rend());
  BackpropDirection(reversed, trace.backward_dir, p.backward_dir, relu,
                    d_merged, grads.backward_dir, grads);
}

#define LEXSEQ_INSTANTIATE(T)                                                 \
  template class BiLstmClassifier<T>;                                         \
  template struct Gradients<T>;                                               \
  template size_t ParameterCount<T>(const BiLstmClassifier<T>&);              \
  template BiLstmClassifier<T> InitParameters<T>(const ModelDims&, uint64_t,  \
                                                 CellActivation);             \
  template std::vector<T> Softmax<T>(std::span<const T>);                     \
  template T CrossEntropyLoss<T>(std::span<const T>, size_t);                 \
  template std::vector<T> LogitGradient<T>(std::span<const T>, size_t);       \
  template size_t Argmax<T>(std::span<const T>);                              \
  template ForwardResult<T> Forward<T>(const EncodedSequence&,                \
                                       const BiLstmClassifier<T>&);           \
  template void Backward<T>(const ForwardTrace<T>&, size_t,                   \
                            const BiLstmClassifier<T>&, Gradients<T>&);

LEXSEQ_INSTANTIATE(float)
LEXSEQ_INSTANTIATE(double)
#undef LEXSEQ_INSTANTIATE

}  // namespace lexseq
