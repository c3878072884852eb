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

#include "lexseq/trainer/trainer.h"

#include <chrono>
#include <cmath>
#include <numeric>

#include "json.hpp"
#include "lexseq/common/error.h"
#include "lexseq/common/parallel.h"
#include "lexseq/common/random.h"
#include "lexseq/trainer/checkpoint.h"

namespace lexseq {
namespace {

struct SampleOutcome {
  double loss = 0;
  bool correct = false;
};

// Forward/backward over docs[begin, end) of `order`, accumulating into grads.
void AccumulateGroup(const BiLstmClassifier<float>& model,
                     const std::vector<LabeledSequence>& data,
                     const std::vector<size_t>& order, size_t begin,
                     size_t end, Gradients<float>& grads,
                     std::vector<SampleOutcome>& outcomes, size_t first) {
  for (size_t k = begin; k < end; ++k) {
    const LabeledSequence& sample = data[order[k]];
    auto result = Forward(sample.sequence, model);
    outcomes[k - first].loss = static_cast<double>(
        CrossEntropyLoss<float>(result.probs, sample.label));
    outcomes[k - first].correct =
        Argmax<float>(result.probs) == sample.label;
    Backward(result.trace, sample.label, model, grads);
  }
}

// Mean loss and accuracy without updating the model.
std::pair<double, double> Score(const BiLstmClassifier<float>& model,
                                const std::vector<LabeledSequence>& data,
                                size_t workers) {
  std::vector<SampleOutcome> outcomes(data.size());
  ParallelFor(data.size(), workers, [&](size_t i) {
    auto result = Forward(data[i].sequence, model);
    outcomes[i].loss = static_cast<double>(
        CrossEntropyLoss<float>(result.probs, data[i].label));
    outcomes[i].correct = Argmax<float>(result.probs) == data[i].label;
  });
  double loss = 0;
  size_t correct = 0;
  for (const auto& o : outcomes) {
    loss += o.loss;
    correct += o.correct ? 1 : 0;
  }
  return {loss / static_cast<double>(data.size()),
          static_cast<double>(correct) / static_cast<double>(data.size())};
}

void CheckModelMatches(const BiLstmClassifier<float>& model,
                       const Vocabulary& vocab) {
  if (model.dims().vocab_rows != vocab.rows()) {
    throw ConfigError("model has " + std::to_string(model.dims().vocab_rows) +
                      " embedding rows but the vocabulary needs " +
                      std::to_string(vocab.rows()));
  }
}

}  // namespace

void TrainConfig::Validate() const {
  if (epochs < 1) throw ConfigError("epochs must be >= 1");
  if (batch_size < 1) throw ConfigError("batch size must be >= 1");
  if (!(learning_rate > 0)) throw ConfigError("learning rate must be > 0");
  if (!(beta1 >= 0 && beta1 < 1) || !(beta2 >= 0 && beta2 < 1)) {
    throw ConfigError("adam betas must lie in [0, 1)");
  }
  if (!(epsilon > 0)) throw ConfigError("adam epsilon must be > 0");
  if (clip_norm < 0) throw ConfigError("clip norm must be >= 0");
  if (workers < 1) throw ConfigError("worker count must be >= 1");
}

std::string HistoryToJson(const TrainHistory& history) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& record : history.epochs) {
    auto optional = [](const std::optional<double>& v) {
      return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
    };
    out.push_back({{"epoch", record.epoch},
                   {"train_loss", record.train_loss},
                   {"train_accuracy", record.train_accuracy},
                   {"validation_loss", optional(record.validation_loss)},
                   {"validation_accuracy", optional(record.validation_accuracy)},
                   {"seconds", record.seconds},
                   {"checkpointed", history.best_epoch == record.epoch}});
  }
  return out.dump(2) + "\n";
}

TokenizerConfig TokenizerConfigFor(const ModelMetadata& metadata,
                                   const Vocabulary& vocab) {
  TokenizerConfig config;
  config.max_sequence_length = metadata.max_sequence_length;
  config.vocabulary_cap = std::max<size_t>(1, vocab.cap());
  config.lowercase = metadata.lowercase;
  return config;
}

std::vector<LabeledSequence> EncodeDocuments(const std::vector<Document>& docs,
                                             const Vocabulary& vocab,
                                             const TokenizerConfig& config,
                                             bool require_labels) {
  config.Validate();
  std::vector<LabeledSequence> out;
  out.reserve(docs.size());
  for (const auto& doc : docs) {
    if (require_labels && !doc.label) {
      throw DataError("document \"" + doc.id + "\" has no label");
    }
    LabeledSequence sample{doc.id, Encode(Tokenize(doc.text, config), vocab, config),
                           doc.label.value_or(0)};
    if (sample.sequence.length == 0) {
      throw DataError("document \"" + doc.id + "\" has no tokens");
    }
    out.push_back(std::move(sample));
  }
  return out;
}

TrainResult TrainEncoded(BiLstmClassifier<float> model,
                         const std::vector<LabeledSequence>& train,
                         const std::vector<LabeledSequence>& validation,
                         const TrainConfig& config,
                         const EpochCallback& on_epoch) {
  config.Validate();
  if (train.empty()) throw DataError("training partition is empty");
  for (const auto* part : {&train, &validation}) {
    for (const auto& sample : *part) {
      if (sample.label >= model.dims().classes) {
        throw DataError("document \"" + sample.id +
                        "\" has a label outside the model's classes");
      }
    }
  }

  const ModelDims dims = model.dims();
  const AdamHyperparams hyper = config.adam();
  TrainResult result{std::move(model), AdamState(dims), {}};
  BiLstmClassifier<float>& net = result.model;

  const size_t max_groups =
      (config.batch_size + kGradientGroupSize - 1) / kGradientGroupSize;
  std::vector<Gradients<float>> group_grads(max_groups, Gradients<float>(dims));
  Gradients<float> batch_grads(dims);
  SplitMix64 shuffle_rng(DeriveSeed(config.seed, kShuffleStream));
  std::vector<size_t> order(train.size());
  double best_accuracy = -1;

  for (size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    auto start = std::chrono::steady_clock::now();
    std::iota(order.begin(), order.end(), size_t{0});
    Shuffle(std::span<size_t>(order), shuffle_rng);

    double loss_sum = 0;
    size_t correct = 0;
    size_t batch_index = 0;
    for (size_t begin = 0; begin < order.size();
         begin += config.batch_size, ++batch_index) {
      const size_t end = std::min(order.size(), begin + config.batch_size);
      const size_t n = end - begin;
      const size_t groups = (n + kGradientGroupSize - 1) / kGradientGroupSize;
      std::vector<SampleOutcome> outcomes(n);
      auto where = [&] {
        return "epoch " + std::to_string(epoch) + " batch " +
               std::to_string(batch_index + 1) + ": ";
      };
      try {
        ParallelFor(groups, config.workers, [&](size_t g) {
          group_grads[g].SetZero();
          const size_t g_begin = begin + g * kGradientGroupSize;
          const size_t g_end = std::min(end, g_begin + kGradientGroupSize);
          AccumulateGroup(net, train, order, g_begin, g_end, group_grads[g],
                          outcomes, begin);
        });
      } catch (const NumericError& e) {
        throw NumericError(where() + e.what());
      }
      for (const auto& o : outcomes) {
        if (!std::isfinite(o.loss)) throw NumericError(where() + "non-finite loss");
        loss_sum += o.loss;
        correct += o.correct ? 1 : 0;
      }

      batch_grads.SetZero();
      for (size_t g = 0; g < groups; ++g) batch_grads.Accumulate(group_grads[g]);
      batch_grads.Scale(1.0f / static_cast<float>(n));
      if (config.clip_norm > 0) {
        double norm = std::sqrt(batch_grads.SquaredNorm());
        if (norm > config.clip_norm) {
          batch_grads.Scale(static_cast<float>(config.clip_norm / norm));
        }
      }
      try {
        AdamUpdate(net, batch_grads, result.adam, hyper);
      } catch (const NumericError& e) {
        throw NumericError(where() + e.what());
      }
    }

    EpochRecord record;
    record.epoch = epoch;
    record.train_loss = loss_sum / static_cast<double>(train.size());
    record.train_accuracy =
        static_cast<double>(correct) / static_cast<double>(train.size());
    if (!validation.empty()) {
      auto [loss, accuracy] = Score(net, validation, config.workers);
      record.validation_loss = loss;
      record.validation_accuracy = accuracy;
    }
    record.seconds = std::chrono::duration<double>(
                         std::chrono::steady_clock::now() - start)
                         .count();

    if (config.checkpoint_path) {
      // Without a validation partition the latest epoch is kept.
      const double accuracy = record.validation_accuracy.value_or(2.0);
      if (accuracy > best_accuracy || !record.validation_accuracy) {
        best_accuracy = accuracy;
        result.history.best_epoch = epoch;
        SaveCheckpoint(net, &result.adam, *config.checkpoint_path);
      }
    }
    result.history.epochs.push_back(record);
    if (on_epoch) on_epoch(record);
  }
  return result;
}

TrainResult Train(BiLstmClassifier<float> model, const SplitDataset& split,
                  const Vocabulary& vocab, const TrainConfig& config,
                  const EpochCallback& on_epoch) {
  CheckModelMatches(model, vocab);
  ModelMetadata& meta = model.metadata();
  if (!meta.labels.empty() && meta.labels.size() != model.dims().classes) {
    throw ConfigError("model metadata lists " +
                      std::to_string(meta.labels.size()) + " labels for " +
                      std::to_string(model.dims().classes) + " classes");
  }
  meta.vocabulary_digest = vocab.Digest();
  meta.split_seed = split.seed;
  meta.split_ratios = {split.ratios.train, split.ratios.validation,
                       split.ratios.test};
  const TokenizerConfig tokenizer = TokenizerConfigFor(meta, vocab);
  auto train = EncodeDocuments(split.train, vocab, tokenizer);
  auto validation = EncodeDocuments(split.validation, vocab, tokenizer);
  return TrainEncoded(std::move(model), train, validation, config, on_epoch);
}

std::vector<std::vector<float>> PredictProbabilities(
    const BiLstmClassifier<float>& model, const std::vector<Document>& docs,
    const Vocabulary& vocab, size_t workers) {
  CheckModelMatches(model, vocab);
  auto encoded = EncodeDocuments(
      docs, vocab, TokenizerConfigFor(model.metadata(), vocab), false);
  std::vector<std::vector<float>> probs(encoded.size());
  ParallelFor(encoded.size(), workers, [&](size_t i) {
    probs[i] = Forward(encoded[i].sequence, model).probs;
  });
  return probs;
}

EvaluationReport Evaluate(const BiLstmClassifier<float>& model,
                          const std::vector<Document>& docs,
                          const Vocabulary& vocab, size_t workers) {
  if (docs.empty()) throw DataError("nothing to evaluate");
  for (const auto& doc : docs) {
    if (!doc.label) throw DataError("document \"" + doc.id + "\" has no label");
  }
  auto probs = PredictProbabilities(model, docs, vocab, workers);
  ConfusionMatrix matrix(model.dims().classes);
  for (size_t i = 0; i < docs.size(); ++i) {
    matrix.Add(*docs[i].label, Argmax<float>(probs[i]));
  }
  std::vector<std::string> labels = model.metadata().labels;
  if (labels.size() != model.dims().classes) {
    labels.clear();
    for (size_t c = 0; c < model.dims().classes; ++c) {
      labels.push_back(std::to_string(c));
    }
  }
  return BuildReport(matrix, std::move(labels));
}

}  // namespace lexseq
