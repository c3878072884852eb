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

#ifndef LEXSEQ_TOKENIZER_VOCABULARY_H_
#define LEXSEQ_TOKENIZER_VOCABULARY_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace lexseq {

struct VocabularyEntry {
  std::string token;
  uint64_t frequency = 0;

  bool operator==(const VocabularyEntry&) const = default;
};

// Frequency-ranked token table. Ids 0 (PAD) and 1 (OOV) are reserved; entry
// k has id k + 2.
class Vocabulary {
 public:
  Vocabulary() = default;
  Vocabulary(std::vector<VocabularyEntry> entries, size_t cap);

  size_t size() const { return entries_.size(); }
  // Embedding rows needed for this vocabulary: entries plus the two specials.
  size_t rows() const { return entries_.size() + 2; }
  size_t cap() const { return cap_; }
  const std::vector<VocabularyEntry>& entries() const { return entries_; }

  // kOovId for unknown tokens.
  int32_t Lookup(std::string_view token) const;
  // Token string for an id >= 2; nullopt for specials and out-of-range ids.
  std::optional<std::string> Decode(int32_t id) const;

  // SHA-256 (hex) of the serialized file form; stored in checkpoints.
  std::string Digest() const;

  // `#vocab v1 size=<N> cap=<C>` followed by `token\tid\tfrequency` rows.
  std::string Serialize() const;
  static Vocabulary Parse(std::string_view contents);

  void Save(const std::filesystem::path& path) const;
  static Vocabulary Load(const std::filesystem::path& path);

  bool operator==(const Vocabulary& other) const {
    return cap_ == other.cap_ && entries_ == other.entries_;
  }

 private:
  std::vector<VocabularyEntry> entries_;
  size_t cap_ = 0;
  std::unordered_map<std::string, int32_t> ids_;
};

// Keeps the `cap` most frequent tokens, ties broken by first occurrence.
Vocabulary BuildVocabulary(const std::vector<std::string>& tokens, size_t cap);

// Streaming form of BuildVocabulary for corpora that should not be
// materialized as one token list.
class VocabularyBuilder {
 public:
  void Add(std::string_view token);
  void Add(const std::vector<std::string>& tokens);
  Vocabulary Build(size_t cap) const;

 private:
  struct Count {
    uint64_t frequency;
    uint64_t first_seen;
  };
  std::unordered_map<std::string, Count> counts_;
  uint64_t position_ = 0;
};

}  // namespace lexseq

#endif  // LEXSEQ_TOKENIZER_VOCABULARY_H_
