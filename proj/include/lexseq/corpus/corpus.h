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

#ifndef LEXSEQ_CORPUS_CORPUS_H_
#define LEXSEQ_CORPUS_CORPUS_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace lexseq {

// Ordered, duplicate-free set of class labels. Position defines the class
// index used everywhere else.
class LabelSet {
 public:
  explicit LabelSet(std::vector<std::string> labels);

  // ARE, Acórdão, Despacho, Outro, RE, Sentença.
  static LabelSet Default();

  // One label per line; order is significant.
  static LabelSet Load(const std::filesystem::path& path);

  size_t size() const { return labels_.size(); }
  const std::string& name(size_t index) const { return labels_.at(index); }
  const std::vector<std::string>& names() const { return labels_; }
  std::optional<size_t> Find(std::string_view label) const;

  bool operator==(const LabelSet& other) const {
    return labels_ == other.labels_;
  }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, size_t> index_;
};

struct Document {
  std::string id;
  std::string text;
  std::optional<size_t> label;
};

struct SplitRatios {
  double train = 0.7;
  double validation = 0.2;
  double test = 0.1;

  void Validate() const;
};

struct SplitDataset {
  std::vector<Document> train;
  std::vector<Document> validation;
  std::vector<Document> test;
  uint64_t seed = 0;
  SplitRatios ratios;
};

// Reads a JSON Lines dataset (`id`, `text`, optional `label`). Blank lines
// are skipped; unknown fields are ignored.
std::vector<Document> LoadDataset(const std::filesystem::path& path,
                                  const LabelSet& labels);

// Parses dataset lines from memory. `source` names the input in errors.
// A null `labels` ignores label fields.
std::vector<Document> ParseDataset(std::string_view contents,
                                   const LabelSet* labels,
                                   std::string_view source = "<memory>");

// Same format, but label fields are ignored (every label is left empty).
std::vector<Document> LoadUnlabeledDataset(const std::filesystem::path& path);

// Writes documents in the JSON Lines format read by LoadDataset.
void SaveDataset(const std::vector<Document>& docs, const LabelSet& labels,
                 const std::filesystem::path& path);

// Per class (in class-index order): documents in input order get a seeded
// Fisher-Yates shuffle, then the first floor(n*train) go to train, the next
// floor(n*validation) to validation and the rest to test.
SplitDataset StratifiedSplit(const std::vector<Document>& docs,
                             const SplitRatios& ratios, uint64_t seed,
                             size_t num_classes);

std::vector<size_t> LabelDistribution(const std::vector<Document>& docs,
                                      const LabelSet& labels);

}  // namespace lexseq

#endif  // LEXSEQ_CORPUS_CORPUS_H_
