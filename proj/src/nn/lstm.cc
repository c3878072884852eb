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

#include <string>

#include "lexseq/common/error.h"
#include "nn/cell.h"

namespace lexseq {
namespace {

template <typename T>
using VectorMap = Eigen::Map<Eigen::Matrix<T, Eigen::Dynamic, 1>>;
template <typename T>
using ConstVectorMap = Eigen::Map<const Eigen::Matrix<T, Eigen::Dynamic, 1>>;

template <typename T>
ConstVectorMap<T> AsVector(std::span<const T> v) {
  return {v.data(), static_cast<Eigen::Index>(v.size())};
}

template <typename T>
void CheckSize(std::span<const T> v, size_t expected, const char* what) {
  if (v.size() != expected) {
    throw Error(std::string("lstm: ") + what + " has size " +
                std::to_string(v.size()) + ", expected " +
                std::to_string(expected));
  }
}

template <typename T>
void CheckShapes(const LstmDirectionParams<T>& p) {
  size_t H = p.hidden();
  if (H == 0 || p.input_dim() == 0 || p.input_weights.rows() != 4 * H ||
      p.recurrent_weights.rows() != 4 * H || p.bias.rows() != 4 * H ||
      p.bias.cols() != 1) {
    throw Error("lstm: inconsistent parameter shapes");
  }
}

}  // namespace

std::string_view ActivationName(CellActivation activation) {
  switch (activation) {
    case CellActivation::kRelu:
      return "relu";
    case CellActivation::kTanh:
      return "tanh";
    case CellActivation::kReluMerge:
      return "relu-merge";
  }
  return "unknown";
}

CellActivation ParseActivation(std::string_view name) {
  if (name == "relu") return CellActivation::kRelu;
  if (name == "tanh") return CellActivation::kTanh;
  if (name == "relu-merge") return CellActivation::kReluMerge;
  throw ConfigError("unknown activation \"" + std::string(name) +
                    "\" (expected relu, tanh or relu-merge)");
}

template <typename T>
LstmStepResult<T> LstmStep(std::span<const T> x, std::span<const T> h_prev,
                           std::span<const T> c_prev,
                           const LstmDirectionParams<T>& params,
                           CellActivation activation, size_t timestep) {
  CheckShapes(params);
  const size_t H = params.hidden();
  CheckSize(x, params.input_dim(), "x");
  CheckSize(h_prev, H, "h_prev");
  CheckSize(c_prev, H, "c_prev");

  LstmStepResult<T> result;
  auto& cache = result.cache;
  cache.x.assign(x.begin(), x.end());
  cache.h_prev.assign(h_prev.begin(), h_prev.end());
  cache.c_prev.assign(c_prev.begin(), c_prev.end());
  cache.pre.resize(4 * H);
  VectorMap<T> z(cache.pre.data(), static_cast<Eigen::Index>(4 * H));
  z.noalias() = params.input_weights.matrix() * AsVector(x);
  z.noalias() += params.recurrent_weights.matrix() * AsVector(h_prev);
  for (size_t k = 0; k < 4 * H; ++k) z[k] += params.bias[k];

  cache.gates.resize(4 * H);
  cache.c.resize(H);
  cache.cell_out.resize(H);
  cache.h.resize(H);
  if (!internal::CellForward(cache.pre.data(), c_prev.data(), H,
                             CellUsesRelu(activation), cache.gates.data(),
                             cache.c.data(), cache.cell_out.data(),
                             cache.h.data())) {
    throw NumericError("non-finite LSTM state at timestep " +
                       std::to_string(timestep));
  }
  result.h = cache.h;
  result.c = cache.c;
  return result;
}

template <typename T>
LstmStepInputGradients<T> LstmStepBackward(
    const LstmStepCache<T>& cache, std::span<const T> dh,
    std::span<const T> dc, const LstmDirectionParams<T>& params,
    CellActivation activation, LstmDirectionParams<T>& grads) {
  CheckShapes(params);
  const size_t H = params.hidden();
  CheckSize(dh, H, "dh");
  CheckSize(dc, H, "dc");
  if (!grads.input_weights.SameShape(params.input_weights) ||
      !grads.recurrent_weights.SameShape(params.recurrent_weights) ||
      !grads.bias.SameShape(params.bias)) {
    throw Error("lstm: gradient buffer shapes do not match parameters");
  }

  LstmStepInputGradients<T> out;
  std::vector<T> dpre(4 * H);
  out.c_prev.resize(H);
  internal::CellBackward(cache.pre.data(), cache.gates.data(),
                         cache.c_prev.data(), cache.c.data(),
                         cache.cell_out.data(), dh.data(), dc.data(), H,
                         CellUsesRelu(activation), dpre.data(),
                         out.c_prev.data());

  ConstVectorMap<T> dz(dpre.data(), static_cast<Eigen::Index>(4 * H));
  auto x = AsVector<T>(cache.x);
  auto h_prev = AsVector<T>(cache.h_prev);
  grads.input_weights.matrix().noalias() += dz * x.transpose();
  grads.recurrent_weights.matrix().noalias() += dz * h_prev.transpose();
  for (size_t k = 0; k < 4 * H; ++k) grads.bias[k] += dpre[k];

  out.x.resize(params.input_dim());
  out.h_prev.resize(H);
  VectorMap<T>(out.x.data(), static_cast<Eigen::Index>(out.x.size())).noalias() =
      params.input_weights.matrix().transpose() * dz;
  VectorMap<T>(out.h_prev.data(), static_cast<Eigen::Index>(H)).noalias() =
      params.recurrent_weights.matrix().transpose() * dz;
  return out;
}

#define LEXSEQ_INSTANTIATE(T)                                                \
  template LstmStepResult<T> LstmStep<T>(                                    \
      std::span<const T>, std::span<const T>, std::span<const T>,            \
      const LstmDirectionParams<T>&, CellActivation, size_t);                \
  template LstmStepInputGradients<T> LstmStepBackward<T>(                    \
      const LstmStepCache<T>&, std::span<const T>, std::span<const T>,       \
      const LstmDirectionParams<T>&, CellActivation, LstmDirectionParams<T>&);

LEXSEQ_INSTANTIATE(float)
LEXSEQ_INSTANTIATE(double)
#undef LEXSEQ_INSTANTIATE

}  // namespace lexseq
