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

#include <sstream>
#include <string>
#include <vector>

#include <gmock/gmock.h>
#include <gtest/gtest.h>

#include "json.hpp"

#include "lexseq/corpus/corpus.h"
#include "lexseq/nn/bilstm.h"
#include "lexseq/tokenizer/vocabulary.h"
#include "lexseq/trainer/checkpoint.h"
#include "support/extraction_stubs.h"
#include "support/temp_dir.h"

namespace lexseq {
namespace {

using ::testing::HasSubstr;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run Cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = RunCli(args, out, err);
  return {code, out.str(), err.str()};
}

const std::string kSynthetic = LEXSEQ_SYNTHETIC_DIR;

class CliTest : public ::testing::Test {
 protected:
  std::string Path(const std::string& name) const {
    return (dir_.path() / name).string();
  }
  std::string Write(const std::string& name, const std::string& contents) {
    return dir_.Write(name, contents).string();
  }

  testing::TempDir dir_;
};

TEST_F(CliTest, HelpAndUsage) {
  auto help = Cli({"--help"});
  EXPECT_EQ(help.code, kExitOk);
  EXPECT_THAT(help.out, HasSubstr("build-vocab"));
  EXPECT_EQ(Cli({}).code, kExitUsage);
  EXPECT_EQ(Cli({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(Cli({"train", "/nonexistent.jsonl", "--vocab", "x", "-o", "y"}).code,
            kExitUsage);
}

TEST_F(CliTest, BadDatasetIsDataError) {
  const auto data = Write("bad.jsonl", "{\"id\": \"a\", \"text\": \"x\"\n");
  auto run = Cli({"build-vocab", data, "-o", Path("v.tsv")});
  EXPECT_EQ(run.code, kExitData);
  EXPECT_THAT(run.err, HasSubstr("error:"));
}

TEST_F(CliTest, BadConfigIsUsageError) {
  const auto data = Write("d.jsonl", "{\"id\": \"a\", \"text\": \"x y\"}\n");
  ASSERT_EQ(Cli({"build-vocab", data, "-o", Path("v.tsv")}).code, kExitOk);
  auto run = Cli({"train", kSynthetic + "/corpus.jsonl", "--vocab", Path("v.tsv"),
                  "-o", Path("m.ckpt"), "--ratios", "0.5,0.5"});
  EXPECT_EQ(run.code, kExitUsage);
  EXPECT_THAT(run.err, HasSubstr("ratios"));
}

TEST_F(CliTest, PredictWithZeroModel) {
  const auto data = Write("d.jsonl",
                          "{\"id\": \"a\", \"text\": \"recurso especial\"}\n"
                          "{\"id\": \"b\", \"text\": \"outro texto\"}\n");
  ASSERT_EQ(Cli({"build-vocab", data, "-o", Path("v.tsv")}).code, kExitOk);
  auto vocab = Vocabulary::Load(Path("v.tsv"));
  BiLstmClassifier<float> zero({vocab.rows(), 4, 3, 6});
  zero.metadata().labels = LabelSet::Default().names();
  zero.metadata().vocabulary_digest = vocab.Digest();
  SaveCheckpoint(zero, nullptr, Path("zero.ckpt"));

  auto run = Cli({"predict", Path("zero.ckpt"), data, "--vocab", Path("v.tsv")});
  ASSERT_EQ(run.code, kExitOk) << run.err;
  std::istringstream lines(run.out);
  std::string line;
  std::vector<std::string> ids;
  while (std::getline(lines, line)) {
    auto json = nlohmann::json::parse(line);
    ids.push_back(json["id"]);
    EXPECT_EQ(json["label"], LabelSet::Default().names()[0]);
    ASSERT_EQ(json["probabilities"].size(), 6u);
    for (double p : json["probabilities"]) EXPECT_NEAR(p, 1.0 / 6, 1e-6);
  }
  EXPECT_EQ(ids, (std::vector<std::string>{"a", "b"}));
}

TEST_F(CliTest, PredictRejectsOtherVocabulary) {
  const auto a = Write("a.jsonl", "{\"id\": \"a\", \"text\": \"um dois\"}\n");
  const auto b = Write("b.jsonl", "{\"id\": \"b\", \"text\": \"tres quatro\"}\n");
  ASSERT_EQ(Cli({"build-vocab", a, "-o", Path("va.tsv")}).code, kExitOk);
  ASSERT_EQ(Cli({"build-vocab", b, "-o", Path("vb.tsv")}).code, kExitOk);
  auto vocab = Vocabulary::Load(Path("va.tsv"));
  BiLstmClassifier<float> zero({vocab.rows(), 2, 2, 6});
  zero.metadata().labels = LabelSet::Default().names();
  zero.metadata().vocabulary_digest = vocab.Digest();
  SaveCheckpoint(zero, nullptr, Path("zero.ckpt"));
  auto run = Cli({"predict", Path("zero.ckpt"), a, "--vocab", Path("vb.tsv")});
  EXPECT_EQ(run.code, kExitData);
  EXPECT_THAT(run.err, HasSubstr("vocabulary digest mismatch"));
}

TEST_F(CliTest, TrainEvaluatePipeline) {
  const std::string corpus = kSynthetic + "/corpus.jsonl";
  const std::string labels = kSynthetic + "/labels.txt";
  auto vocab_run = Cli({"build-vocab", corpus, "--train-split", "--labels",
                        labels, "--seed", "3", "-o", Path("v.tsv")});
  ASSERT_EQ(vocab_run.code, kExitOk) << vocab_run.err;
  EXPECT_THAT(vocab_run.err, HasSubstr("from 420 documents"));

  const std::vector<std::string> train = {
      "train", corpus, "--labels", labels, "--vocab", Path("v.tsv"),
      "--seed", "3", "--epochs", "4", "--embed", "16", "--hidden", "16",
      "--lr", "0.01", "--batch", "32", "--history", Path("h.json"),
      "-o", Path("m.ckpt")};
  auto run = Cli(train);
  ASSERT_EQ(run.code, kExitOk) << run.err;
  EXPECT_THAT(run.err, HasSubstr("split: 420 train, 120 validation, 60 test"));
  auto history = nlohmann::json::parse(testing::ReadFile(Path("h.json")));
  EXPECT_EQ(history.size(), 4u);

  auto eval = Cli({"evaluate", Path("m.ckpt"), corpus, "--vocab", Path("v.tsv"),
                   "--partition", "test", "--csv", Path("c.csv")});
  ASSERT_EQ(eval.code, kExitOk) << eval.err;
  auto report = nlohmann::json::parse(eval.out);
  EXPECT_GE(report["accuracy"].get<double>(), 0.95);
  ASSERT_EQ(report["per_class"].size(), 6u);
  size_t support = 0;
  for (const auto& row : report["per_class"]) support += row["support"].get<size_t>();
  EXPECT_EQ(support, 60u);
  EXPECT_THAT(testing::ReadFile(Path("c.csv")), HasSubstr("true\\predicted"));

  // Same command, same bytes.
  auto again = train;
  again.back() = Path("m2.ckpt");
  ASSERT_EQ(Cli(again).code, kExitOk);
  EXPECT_EQ(testing::ReadFile(Path("m.ckpt")), testing::ReadFile(Path("m2.ckpt")));
}

TEST_F(CliTest, ExtractWithCommandOcr) {
  const auto embedded = testing::Words(300);
  Write("p2.txt", testing::Words(200));
  const auto manifest = Write(
      "pages.jsonl",
      nlohmann::json({{"id", "d1"}, {"label", "RE"}, {"page", 1},
                      {"text", testing::Garbage(20)}, {"image", "p2.txt"}})
              .dump() +
          "\n" +
          nlohmann::json({{"id", "d1"}, {"page", 2}, {"text", embedded}}).dump() +
          "\n");
  auto run = Cli({"extract", manifest, "--ocr-cmd", "cat {input}", "--token-target",
                  "400", "-o", Path("out.jsonl")});
  ASSERT_EQ(run.code, kExitOk) << run.err;
  auto docs = LoadDataset(Path("out.jsonl"), LabelSet::Default());
  ASSERT_EQ(docs.size(), 1u);
  EXPECT_EQ(docs[0].id, "d1");
  EXPECT_EQ(docs[0].label, LabelSet::Default().Find("RE"));
  auto line = nlohmann::json::parse(testing::ReadFile(Path("out.jsonl")));
  EXPECT_EQ(line["extraction"]["token_count"], 500);
  EXPECT_EQ(line["extraction"]["complete"], true);
  EXPECT_EQ(line["extraction"]["pages_used"][0]["source"], "ocr");
  EXPECT_EQ(line["extraction"]["pages_used"][1]["source"], "embedded");
}

TEST_F(CliTest, ExtractWithoutOcrBackend) {
  Write("p1.png", "image");
  const auto manifest = Write(
      "pages.jsonl", "{\"page\": 1, \"text\": \"\", \"image\": \"p1.png\"}\n");
  auto run = Cli({"extract", manifest, "-o", Path("out.jsonl")});
  EXPECT_EQ(run.code, kExitRuntime);
  EXPECT_THAT(run.err, HasSubstr("no OCR backend"));
}

}  // namespace
}  // namespace lexseq
