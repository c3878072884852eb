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

#ifndef LEXSEQ_SRC_NN_CELL_H_
#define LEXSEQ_SRC_NN_CELL_H_

#include <cmath>
#include <cstddef>

namespace lexseq {
namespace internal {

template <typename T>
inline T Sigmoid(T x) {
  if (x >= T(0)) return T(1) / (T(1) + std::exp(-x));
  T e = std::exp(x);
  return e / (T(1) + e);
}

template <typename T>
inline T Phi(T x, bool relu) {
  return relu ? (x > T(0) ? x : T(0)) : std::tanh(x);
}

// d phi / dx expressed through the input x and output y = phi(x).
template <typename T>
inline T PhiDerivative(T x, T y, bool relu) {
  return relu ? (x > T(0) ? T(1) : T(0)) : T(1) - y * y;
}

// Gate nonlinearities and state update for one step. `pre` holds the 4H
// pre-activations in [i, f, g, o] order. Returns false when c or h is not
// finite.
template <typename T>
bool CellForward(const T* pre, const T* c_prev, size_t hidden, bool relu,
                 T* gates, T* c, T* cell_out, T* h) {
  const size_t H = hidden;
  bool finite = true;
  for (size_t k = 0; k < H; ++k) {
    T i = Sigmoid(pre[k]);
    T f = Sigmoid(pre[H + k]);
    T g = Phi(pre[2 * H + k], relu);
    T o = Sigmoid(pre[3 * H + k]);
    gates[k] = i;
    gates[H + k] = f;
    gates[2 * H + k] = g;
    gates[3 * H + k] = o;
    c[k] = f * c_prev[k] + i * g;
    cell_out[k] = Phi(c[k], relu);
    h[k] = o * cell_out[k];
    finite = finite && std::isfinite(c[k]) && std::isfinite(h[k]);
  }
  return finite;
}

// Backward through CellForward. `dh` and `dc` are the total gradients
// arriving at this step's h and c. Writes dL/dpre (4H) and dL/dc_prev (H).
template <typename T>
void CellBackward(const T* pre, const T* gates, const T* c_prev, const T* c,
                  const T* cell_out, const T* dh, const T* dc, size_t hidden,
                  bool relu, T* dpre, T* dc_prev) {
  const size_t H = hidden;
  for (size_t k = 0; k < H; ++k) {
    T i = gates[k];
    T f = gates[H + k];
    T g = gates[2 * H + k];
    T o = gates[3 * H + k];
    T d_o = dh[k] * cell_out[k];
    T d_c = dc[k] + dh[k] * o * PhiDerivative(c[k], cell_out[k], relu);
    T d_i = d_c * g;
    T d_f = d_c * c_prev[k];
    T d_g = d_c * i;
    dc_prev[k] = d_c * f;
    dpre[k] = d_i * i * (T(1) - i);
    dpre[H + k] = d_f * f * (T(1) - f);
    dpre[2 * H + k] = d_g * PhiDerivative(pre[2 * H + k], g, relu);
    dpre[3 * H + k] = d_o * o * (T(1) - o);
  }
}

}  // namespace internal
}  // namespace lexseq

#endif  // LEXSEQ_SRC_NN_CELL_H_
