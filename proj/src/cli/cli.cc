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

#include "lexseq/cli/cli.h"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "lexseq/common/error.h"
#include "lexseq/common/parallel.h"
#include "lexseq/common/random.h"
#include "lexseq/corpus/corpus.h"
#include "lexseq/extraction/extraction.h"
#include "lexseq/metrics/metrics.h"
#include "lexseq/nn/bilstm.h"
#include "lexseq/tokenizer/tokenizer.h"
#include "lexseq/tokenizer/vocabulary.h"
#include "lexseq/trainer/checkpoint.h"
#include "lexseq/trainer/trainer.h"

namespace lexseq {
namespace {

struct ExtractOptions {
  std::string manifest;
  std::string ocr_command;
  std::string output;
  double min_wordlike_ratio = 0.70;
  size_t min_chars = 50;
  size_t token_target = 1000;
  bool no_lowercase = false;
};

struct BuildVocabOptions {
  std::string input;
  std::string output;
  size_t cap = 100000;
  bool train_split = false;
  std::string labels;
  uint64_t seed = 0;
  std::string ratios = "0.7,0.2,0.1";
  bool no_lowercase = false;
};

struct TrainOptions {
  std::string data;
  std::string labels;
  std::string vocab;
  std::string output;
  std::string history;
  size_t epochs = 20;
  size_t batch = 64;
  double lr = 0.001;
  uint64_t seed = 0;
  size_t max_len = 1000;
  size_t embed = 100;
  size_t hidden = 200;
  std::string activation = "relu";
  double clip_norm = 0;
  std::string ratios = "0.7,0.2,0.1";
  bool no_lowercase = false;
};

struct EvaluateOptions {
  std::string checkpoint;
  std::string data;
  std::string vocab;
  std::string output;
  std::string csv;
  std::string partition = "all";
};

struct PredictOptions {
  std::string checkpoint;
  std::string data;
  std::string vocab;
};

size_t WorkerCount() {
  const char* value = std::getenv("LEXSEQ_THREADS");
  if (value == nullptr || *value == '\0') return 1;
  size_t workers = 0;
  std::string_view text(value);
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), workers);
  if (ec != std::errc() || ptr != text.data() + text.size() || workers < 1) {
    throw ConfigError("LEXSEQ_THREADS must be a positive integer");
  }
  return workers;
}

SplitRatios ParseRatios(const std::string& text) {
  std::vector<double> values;
  std::stringstream in(text);
  std::string part;
  while (std::getline(in, part, ',')) {
    try {
      size_t used = 0;
      values.push_back(std::stod(part, &used));
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      throw ConfigError("invalid split ratio \"" + part + "\"");
    }
  }
  if (values.size() != 3) {
    throw ConfigError("--ratios needs three comma-separated fractions");
  }
  SplitRatios ratios{values[0], values[1], values[2]};
  ratios.Validate();
  return ratios;
}

void WriteFile(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << contents;
  if (!out) throw Error("write failed for " + path);
}

void RunExtract(const ExtractOptions& opts) {
  QualityGateConfig gate{opts.min_wordlike_ratio, opts.min_chars};
  gate.Validate();
  TokenizerConfig tokenizer;
  tokenizer.lowercase = !opts.no_lowercase;
  std::unique_ptr<OcrBackend> ocr;
  if (!opts.ocr_command.empty()) ocr = MakeCommandOcrBackend(opts.ocr_command);

  auto docs = LoadPageManifest(opts.manifest);
  std::vector<ExtractionResult> results(docs.size());
  ParallelFor(docs.size(), WorkerCount(), [&](size_t i) {
    try {
      results[i] = ExtractText(docs[i].pages, ocr.get(), gate, tokenizer,
                               opts.token_target);
    } catch (const Error& e) {
      // Re-raise with the document id, keeping the error category.
      const std::string message = "document \"" + docs[i].id + "\": " + e.what();
      if (dynamic_cast<const DataError*>(&e)) throw DataError(message);
      throw OcrError(message);
    }
  });

  std::string lines;
  for (size_t i = 0; i < docs.size(); ++i) {
    nlohmann::json pages = nlohmann::json::array();
    for (const auto& use : results[i].pages_used) {
      pages.push_back({{"page", use.page_number},
                       {"source", std::string(PageSourceName(use.source))}});
    }
    nlohmann::json line = {
        {"id", docs[i].id},
        {"text", results[i].text},
        {"extraction",
         {{"pages_used", std::move(pages)},
          {"token_count", results[i].token_count},
          {"complete", results[i].complete}}}};
    if (docs[i].label) line["label"] = *docs[i].label;
    lines += line.dump() + "\n";
  }
  WriteFile(opts.output, lines);
}

void RunBuildVocab(const BuildVocabOptions& opts, std::ostream& err) {
  TokenizerConfig tokenizer;
  tokenizer.vocabulary_cap = opts.cap;
  tokenizer.lowercase = !opts.no_lowercase;
  tokenizer.Validate();

  std::vector<Document> docs;
  if (opts.train_split) {
    LabelSet labels = opts.labels.empty() ? LabelSet::Default()
                                          : LabelSet::Load(opts.labels);
    auto all = LoadDataset(opts.input, labels);
    docs = StratifiedSplit(all, ParseRatios(opts.ratios),
                           DeriveSeed(opts.seed, kSplitStream), labels.size())
               .train;
  } else {
    docs = LoadUnlabeledDataset(opts.input);
  }
  VocabularyBuilder builder;
  for (const auto& doc : docs) builder.Add(Tokenize(doc.text, tokenizer));
  Vocabulary vocab = builder.Build(opts.cap);
  vocab.Save(opts.output);
  err << "vocabulary: " << vocab.size() << " entries from " << docs.size()
      << " documents\n";
}

void RunTrain(const TrainOptions& opts, std::ostream& err) {
  LabelSet labels = opts.labels.empty() ? LabelSet::Default()
                                        : LabelSet::Load(opts.labels);
  Vocabulary vocab = Vocabulary::Load(opts.vocab);
  SplitRatios ratios = ParseRatios(opts.ratios);

  TrainConfig config;
  config.epochs = opts.epochs;
  config.batch_size = opts.batch;
  config.learning_rate = opts.lr;
  config.seed = opts.seed;
  config.checkpoint_path = opts.output;
  config.clip_norm = opts.clip_norm;
  config.workers = WorkerCount();
  config.Validate();

  ModelDims dims{vocab.rows(), opts.embed, opts.hidden, labels.size()};
  auto model = InitParameters<float>(dims, DeriveSeed(opts.seed, kInitStream),
                                     ParseActivation(opts.activation));
  model.metadata().labels = labels.names();
  model.metadata().max_sequence_length = opts.max_len;
  model.metadata().lowercase = !opts.no_lowercase;
  TokenizerConfigFor(model.metadata(), vocab).Validate();

  auto docs = LoadDataset(opts.data, labels);
  SplitDataset split = StratifiedSplit(
      docs, ratios, DeriveSeed(opts.seed, kSplitStream), labels.size());
  err << "split: " << split.train.size() << " train, "
      << split.validation.size() << " validation, " << split.test.size()
      << " test; " << ParameterCount(dims) << " parameters\n";

  auto result = Train(std::move(model), split, vocab, config,
                      [&](const EpochRecord& r) {
                        err << "epoch " << r.epoch << ": train loss "
                            << std::fixed << std::setprecision(4)
                            << r.train_loss << " acc " << r.train_accuracy;
                        if (r.validation_accuracy) {
                          err << ", validation loss " << *r.validation_loss
                              << " acc " << *r.validation_accuracy;
                        }
                        err << " (" << std::setprecision(1) << r.seconds
                            << "s)\n";
                        err.unsetf(std::ios::floatfield);
                      });
  if (!opts.history.empty()) WriteFile(opts.history, HistoryToJson(result.history));
  if (result.history.best_epoch) {
    err << "checkpoint: epoch " << *result.history.best_epoch << " -> "
        << opts.output << "\n";
  }
}

std::vector<Document> SelectPartition(const std::vector<Document>& docs,
                                      const ModelMetadata& meta,
                                      const std::string& partition) {
  if (partition == "all") return docs;
  if (!meta.split_seed) {
    throw ConfigError("checkpoint does not record its training split");
  }
  SplitRatios ratios{meta.split_ratios[0], meta.split_ratios[1],
                     meta.split_ratios[2]};
  SplitDataset split =
      StratifiedSplit(docs, ratios, *meta.split_seed, meta.labels.size());
  if (partition == "train") return split.train;
  if (partition == "validation") return split.validation;
  return split.test;
}

void RunEvaluate(const EvaluateOptions& opts, std::ostream& out,
                 std::ostream& err) {
  Vocabulary vocab = Vocabulary::Load(opts.vocab);
  Checkpoint checkpoint = LoadCheckpoint(opts.checkpoint, &vocab);
  const auto& meta = checkpoint.model.metadata();
  LabelSet labels(meta.labels);
  auto docs = SelectPartition(LoadDataset(opts.data, labels), meta, opts.partition);
  EvaluationReport report =
      Evaluate(checkpoint.model, docs, vocab, WorkerCount());
  std::string json = ReportToJson(report);
  if (opts.output.empty()) {
    out << json;
  } else {
    WriteFile(opts.output, json);
  }
  if (!opts.csv.empty()) WriteFile(opts.csv, ConfusionToCsv(report.matrix, report.labels));
  err << "evaluated " << report.matrix.Total() << " documents: accuracy "
      << report.accuracy << ", weighted F1 " << report.weighted.f1
      << ", macro F1 " << report.macro.f1 << "\n";
}

void RunPredict(const PredictOptions& opts, std::ostream& out) {
  Vocabulary vocab = Vocabulary::Load(opts.vocab);
  Checkpoint checkpoint = LoadCheckpoint(opts.checkpoint, &vocab);
  const auto& meta = checkpoint.model.metadata();
  auto docs = LoadUnlabeledDataset(opts.data);
  auto probs = PredictProbabilities(checkpoint.model, docs, vocab, WorkerCount());
  for (size_t i = 0; i < docs.size(); ++i) {
    nlohmann::json line = {
        {"id", docs[i].id},
        {"label", meta.labels.at(Argmax<float>(probs[i]))},
        {"probabilities", probs[i]}};
    out << line.dump() << "\n";
  }
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"lexseq: Bi-LSTM legal document classifier"};
  app.name("lexseq");
  app.require_subcommand(1);

  ExtractOptions extract;
  auto* extract_cmd = app.add_subcommand(
      "extract", "Extract page text (embedded or OCR) into a dataset");
  extract_cmd->add_option("manifest", extract.manifest, "Page manifest (JSON Lines)")
      ->required()->check(CLI::ExistingFile);
  extract_cmd->add_option("--ocr-cmd", extract.ocr_command,
                          "OCR command template with {input}");
  extract_cmd->add_option("-o,--output", extract.output, "Output dataset")->required();
  extract_cmd->add_option("--min-wordlike-ratio", extract.min_wordlike_ratio,
                          "Quality gate threshold")->capture_default_str();
  extract_cmd->add_option("--min-chars", extract.min_chars,
                          "Minimum characters for embedded text")->capture_default_str();
  extract_cmd->add_option("--token-target", extract.token_target,
                          "Stop once this many tokens are collected")
      ->capture_default_str()->check(CLI::PositiveNumber);
  extract_cmd->add_flag("--no-lowercase", extract.no_lowercase);

  BuildVocabOptions vocab;
  auto* vocab_cmd = app.add_subcommand("build-vocab", "Build the token vocabulary");
  vocab_cmd->add_option("input", vocab.input, "Training documents (JSON Lines)")
      ->required()->check(CLI::ExistingFile);
  vocab_cmd->add_option("--cap", vocab.cap, "Maximum vocabulary entries")
      ->capture_default_str()->check(CLI::PositiveNumber);
  vocab_cmd->add_option("-o,--output", vocab.output, "Vocabulary file")->required();
  vocab_cmd->add_flag("--train-split", vocab.train_split,
                      "Count only the training partition of the stratified split");
  vocab_cmd->add_option("--labels", vocab.labels, "Labels file")
      ->check(CLI::ExistingFile);
  vocab_cmd->add_option("--seed", vocab.seed, "Split seed")->capture_default_str();
  vocab_cmd->add_option("--ratios", vocab.ratios, "train,validation,test")
      ->capture_default_str();
  vocab_cmd->add_flag("--no-lowercase", vocab.no_lowercase);

  TrainOptions train;
  auto* train_cmd = app.add_subcommand("train", "Train a classifier");
  train_cmd->add_option("data", train.data, "Labeled documents (JSON Lines)")
      ->required()->check(CLI::ExistingFile);
  train_cmd->add_option("--labels", train.labels, "Labels file")
      ->check(CLI::ExistingFile);
  train_cmd->add_option("--vocab", train.vocab, "Vocabulary file")
      ->required()->check(CLI::ExistingFile);
  train_cmd->add_option("--epochs", train.epochs)->capture_default_str();
  train_cmd->add_option("--batch", train.batch)->capture_default_str();
  train_cmd->add_option("--lr", train.lr)->capture_default_str();
  train_cmd->add_option("--seed", train.seed)->capture_default_str();
  train_cmd->add_option("-o,--output", train.output, "Checkpoint path")->required();
  train_cmd->add_option("--history", train.history, "Per-epoch history (JSON)");
  train_cmd->add_option("--max-len", train.max_len)->capture_default_str();
  train_cmd->add_option("--embed", train.embed)->capture_default_str();
  train_cmd->add_option("--hidden", train.hidden)->capture_default_str();
  train_cmd->add_option("--activation", train.activation)
      ->capture_default_str()
      ->check(CLI::IsMember({"relu", "tanh", "relu-merge"}));
  train_cmd->add_option("--clip-norm", train.clip_norm,
                        "Clip the gradient norm (0 = off; 5.0 is a common choice)")
      ->capture_default_str();
  train_cmd->add_option("--ratios", train.ratios, "train,validation,test")
      ->capture_default_str();
  train_cmd->add_flag("--no-lowercase", train.no_lowercase);

  EvaluateOptions evaluate;
  auto* eval_cmd = app.add_subcommand("evaluate", "Evaluate a checkpoint");
  eval_cmd->add_option("checkpoint", evaluate.checkpoint)
      ->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("data", evaluate.data)->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--vocab", evaluate.vocab, "Vocabulary file")
      ->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("-o,--output", evaluate.output, "Report path (default: stdout)");
  eval_cmd->add_option("--csv", evaluate.csv, "Confusion matrix CSV path");
  eval_cmd->add_option("--partition", evaluate.partition,
                       "all, or a partition of the training split")
      ->capture_default_str()
      ->check(CLI::IsMember({"all", "train", "validation", "test"}));

  PredictOptions predict;
  auto* predict_cmd = app.add_subcommand("predict", "Label documents");
  predict_cmd->add_option("checkpoint", predict.checkpoint)
      ->required()->check(CLI::ExistingFile);
  predict_cmd->add_option("data", predict.data)->required()->check(CLI::ExistingFile);
  predict_cmd->add_option("--vocab", predict.vocab, "Vocabulary file")
      ->required()->check(CLI::ExistingFile);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (*extract_cmd) RunExtract(extract);
    if (*vocab_cmd) RunBuildVocab(vocab, err);
    if (*train_cmd) RunTrain(train, err);
    if (*eval_cmd) RunEvaluate(evaluate, out, err);
    if (*predict_cmd) RunPredict(predict, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DataError& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}

}  // namespace lexseq
