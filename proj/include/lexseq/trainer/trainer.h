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

#ifndef LEXSEQ_TRAINER_TRAINER_H_
#define LEXSEQ_TRAINER_TRAINER_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lexseq/corpus/corpus.h"
#include "lexseq/metrics/metrics.h"
#include "lexseq/nn/bilstm.h"
#include "lexseq/tokenizer/tokenizer.h"
#include "lexseq/tokenizer/vocabulary.h"
#include "lexseq/trainer/adam.h"

namespace lexseq {

struct TrainConfig {
  size_t epochs = 20;
  size_t batch_size = 64;
  double learning_rate = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-7;
  uint64_t seed = 0;
  // Best-validation-accuracy checkpoint is written here when set.
  std::optional<std::filesystem::path> checkpoint_path;
  // Global gradient-norm clipping threshold; 0 disables clipping.
  double clip_norm = 0;
  size_t workers = 1;

  void Validate() const;
  AdamHyperparams adam() const {
    return {learning_rate, beta1, beta2, epsilon};
  }
};

// Documents per gradient partial sum. Partial sums are reduced in group
// order, so results are identical for any worker count.
inline constexpr size_t kGradientGroupSize = 8;

struct EpochRecord {
  size_t epoch = 0;  // 1-based
  double train_loss = 0;
  double train_accuracy = 0;
  std::optional<double> validation_loss;
  std::optional<double> validation_accuracy;
  double seconds = 0;
};

struct TrainHistory {
  std::vector<EpochRecord> epochs;
  // Epoch whose parameters were checkpointed, when checkpointing is on.
  std::optional<size_t> best_epoch;
};

// JSON array of per-epoch records.
std::string HistoryToJson(const TrainHistory& history);

struct LabeledSequence {
  std::string id;
  EncodedSequence sequence;
  size_t label = 0;
};

// Tokenizer settings recorded in the model metadata.
TokenizerConfig TokenizerConfigFor(const ModelMetadata& metadata,
                                   const Vocabulary& vocab);

// Tokenizes and encodes every document. Documents without tokens, and
// (for labeled use) documents without labels, are rejected by id.
std::vector<LabeledSequence> EncodeDocuments(const std::vector<Document>& docs,
                                             const Vocabulary& vocab,
                                             const TokenizerConfig& config,
                                             bool require_labels = true);

struct TrainResult {
  BiLstmClassifier<float> model;
  AdamState adam;
  TrainHistory history;
};

using EpochCallback = std::function<void(const EpochRecord&)>;

TrainResult TrainEncoded(BiLstmClassifier<float> model,
                         const std::vector<LabeledSequence>& train,
                         const std::vector<LabeledSequence>& validation,
                         const TrainConfig& config,
                         const EpochCallback& on_epoch = {});

// Checks the model against the vocabulary and label count, records the
// vocabulary digest and split in its metadata, then trains.
TrainResult Train(BiLstmClassifier<float> model, const SplitDataset& split,
                  const Vocabulary& vocab, const TrainConfig& config,
                  const EpochCallback& on_epoch = {});

// Class probabilities for each document, in input order.
std::vector<std::vector<float>> PredictProbabilities(
    const BiLstmClassifier<float>& model, const std::vector<Document>& docs,
    const Vocabulary& vocab, size_t workers = 1);

// tokenize -> encode -> forward -> argmax (ties to the lowest index), then
// the metrics report.
EvaluationReport Evaluate(const BiLstmClassifier<float>& model,
                          const std::vector<Document>& docs,
                          const Vocabulary& vocab, size_t workers = 1);

}  // namespace lexseq

#endif  // LEXSEQ_TRAINER_TRAINER_H_
