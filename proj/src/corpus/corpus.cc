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

#include "lexseq/corpus/corpus.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "json.hpp"
#include "lexseq/common/error.h"
#include "lexseq/common/random.h"

namespace lexseq {
namespace {

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

bool IsBlank(std::string_view line) {
  return std::all_of(line.begin(), line.end(), [](char c) {
    return c == ' ' || c == '\t' || c == '\r';
  });
}

size_t FloorCount(size_t n, double ratio) {
  // The epsilon absorbs representation error such as 0.29 * 100 = 28.999...
  return static_cast<size_t>(std::floor(static_cast<double>(n) * ratio + 1e-9));
}

}  // namespace

LabelSet::LabelSet(std::vector<std::string> labels)
    : labels_(std::move(labels)) {
  if (labels_.size() < 2) {
    throw DataError("label set needs at least 2 labels, got " +
                    std::to_string(labels_.size()));
  }
  for (size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i].empty()) throw DataError("empty label at position " +
                                            std::to_string(i + 1));
    if (!index_.emplace(labels_[i], i).second) {
      throw DataError("duplicate label \"" + labels_[i] + "\"");
    }
  }
}

LabelSet LabelSet::Default() {
  return LabelSet({"ARE", "Acórdão", "Despacho", "Outro", "RE", "Sentença"});
}

LabelSet LabelSet::Load(const std::filesystem::path& path) {
  std::istringstream in(ReadFile(path));
  std::vector<std::string> labels;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    labels.push_back(line);
  }
  while (!labels.empty() && labels.back().empty()) labels.pop_back();
  return LabelSet(std::move(labels));
}

std::optional<size_t> LabelSet::Find(std::string_view label) const {
  auto it = index_.find(std::string(label));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

void SplitRatios::Validate() const {
  if (train < 0 || validation < 0 || test < 0) {
    throw ConfigError("split ratios must be non-negative");
  }
  if (std::abs(train + validation + test - 1.0) > 1e-9) {
    throw ConfigError("split ratios must sum to 1");
  }
}

std::vector<Document> ParseDataset(std::string_view contents,
                                   const LabelSet* labels,
                                   std::string_view source) {
  std::vector<Document> docs;
  std::unordered_set<std::string> seen;
  size_t line_number = 0;
  size_t begin = 0;
  while (begin < contents.size()) {
    size_t end = contents.find('\n', begin);
    if (end == std::string_view::npos) end = contents.size();
    std::string_view line = contents.substr(begin, end - begin);
    begin = end + 1;
    ++line_number;
    if (IsBlank(line)) continue;

    auto where = [&] {
      return std::string(source) + ":" + std::to_string(line_number) + ": ";
    };
    nlohmann::json object;
    try {
      object = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw DataError(where() + "malformed JSON (" + e.what() + ")");
    }
    if (!object.is_object()) throw DataError(where() + "expected an object");
    auto id = object.find("id");
    auto text = object.find("text");
    if (id == object.end() || !id->is_string() || id->get<std::string>().empty()) {
      throw DataError(where() + "missing or empty string field \"id\"");
    }
    if (text == object.end() || !text->is_string()) {
      throw DataError(where() + "missing string field \"text\"");
    }
    Document doc{id->get<std::string>(), text->get<std::string>(), std::nullopt};
    if (auto label = object.find("label");
        labels != nullptr && label != object.end() && !label->is_null()) {
      if (!label->is_string()) {
        throw DataError(where() + "field \"label\" must be a string");
      }
      auto name = label->get<std::string>();
      doc.label = labels->Find(name);
      if (!doc.label) throw DataError(where() + "unknown label \"" + name + "\"");
    }
    if (!seen.insert(doc.id).second) {
      throw DataError(where() + "duplicate id \"" + doc.id + "\"");
    }
    docs.push_back(std::move(doc));
  }
  return docs;
}

std::vector<Document> LoadDataset(const std::filesystem::path& path,
                                  const LabelSet& labels) {
  return ParseDataset(ReadFile(path), &labels, path.string());
}

std::vector<Document> LoadUnlabeledDataset(const std::filesystem::path& path) {
  return ParseDataset(ReadFile(path), nullptr, path.string());
}

void SaveDataset(const std::vector<Document>& docs, const LabelSet& labels,
                 const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  for (const auto& doc : docs) {
    nlohmann::json object = {{"id", doc.id}, {"text", doc.text}};
    if (doc.label) object["label"] = labels.name(*doc.label);
    out << object.dump() << '\n';
  }
}

SplitDataset StratifiedSplit(const std::vector<Document>& docs,
                             const SplitRatios& ratios, uint64_t seed,
                             size_t num_classes) {
  ratios.Validate();
  if (docs.empty()) throw DataError("cannot split an empty dataset");
  std::vector<std::vector<size_t>> by_class(num_classes);
  for (size_t i = 0; i < docs.size(); ++i) {
    if (!docs[i].label) {
      throw DataError("document \"" + docs[i].id + "\" has no label");
    }
    if (*docs[i].label >= num_classes) {
      throw DataError("document \"" + docs[i].id + "\" has label index " +
                      std::to_string(*docs[i].label) + " outside the label set");
    }
    by_class[*docs[i].label].push_back(i);
  }

  SplitDataset split;
  split.seed = seed;
  split.ratios = ratios;
  SplitMix64 rng(seed);
  for (auto& members : by_class) {
    Shuffle(std::span<size_t>(members), rng);
    size_t n_train = FloorCount(members.size(), ratios.train);
    size_t n_val = std::min(FloorCount(members.size(), ratios.validation),
                            members.size() - n_train);
    for (size_t k = 0; k < members.size(); ++k) {
      const Document& doc = docs[members[k]];
      if (k < n_train) {
        split.train.push_back(doc);
      } else if (k < n_train + n_val) {
        split.validation.push_back(doc);
      } else {
        split.test.push_back(doc);
      }
    }
  }
  return split;
}

std::vector<size_t> LabelDistribution(const std::vector<Document>& docs,
                                      const LabelSet& labels) {
  std::vector<size_t> counts(labels.size(), 0);
  for (const auto& doc : docs) {
    if (!doc.label) {
      throw DataError("document \"" + doc.id + "\" has no label");
    }
    counts.at(*doc.label) += 1;
  }
  return counts;
}

}  // namespace lexseq
