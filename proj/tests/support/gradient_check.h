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

#ifndef LEXSEQ_TESTS_SUPPORT_GRADIENT_CHECK_H_
#define LEXSEQ_TESTS_SUPPORT_GRADIENT_CHECK_H_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "lexseq/common/random.h"
#include "lexseq/nn/bilstm.h"

namespace lexseq {
namespace testing {

// Central differences (f(x+h) - f(x-h)) / 2h for every entry of `params`,
// restoring each entry afterwards.
std::vector<double> NumericalGradient(const std::function<double()>& f,
                                      std::span<double> params, double step);

// ||analytic - numeric|| / max(||analytic||, ||numeric||); 0 when both vanish.
double RelativeError(std::span<const double> analytic,
                     std::span<const double> numeric);

struct GradientCheckResult {
  double max_relative_error = 0;
  std::string worst_tensor;
};

// Random model: Glorot init from `seed`, biases replaced by uniform noise so
// no gate starts exactly at a kink.
BiLstmClassifier<double> RandomTinyModel(const ModelDims& dims, uint64_t seed,
                                         CellActivation activation);

EncodedSequence RandomSequence(size_t vocab_rows, size_t length,
                               size_t capacity, SplitMix64& rng);

// Cross-entropy of `model` on `seq` from an independent loop-based forward
// pass evaluated in extended precision.
long double ReferenceLoss(const BiLstmClassifier<double>& model,
                          const EncodedSequence& seq, size_t target);

// Backward() on a 64-bit model against central differences of
// ReferenceLoss().
GradientCheckResult CheckGradients(const BiLstmClassifier<double>& model,
                                   const EncodedSequence& seq, size_t target,
                                   double step = 1e-5);

// Backward() on the 32-bit cast of `model` against the same central
// differences.
GradientCheckResult CheckGradients32(const BiLstmClassifier<double>& model,
                                     const EncodedSequence& seq, size_t target,
                                     double step = 1e-5);

}  // namespace testing
}  // namespace lexseq

#endif  // LEXSEQ_TESTS_SUPPORT_GRADIENT_CHECK_H_
