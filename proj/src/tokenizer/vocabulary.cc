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

#include "lexseq/tokenizer/vocabulary.h"

#include <openssl/evp.h>

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

#include "lexseq/common/error.h"

namespace lexseq {
namespace {

constexpr std::string_view kHeaderPrefix = "#vocab ";

template <typename Int>
Int ParseInt(std::string_view text, std::string_view what) {
  Int value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw DataError("vocabulary: invalid " + std::string(what) + " \"" +
                    std::string(text) + "\"");
  }
  return value;
}

std::vector<std::string_view> SplitOn(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  size_t begin = 0;
  while (true) {
    size_t end = text.find(sep, begin);
    if (end == std::string_view::npos) {
      parts.push_back(text.substr(begin));
      return parts;
    }
    parts.push_back(text.substr(begin, end - begin));
    begin = end + 1;
  }
}

// Value of a `key=value` header field.
std::string_view HeaderField(std::string_view field, std::string_view key) {
  if (field.size() <= key.size() + 1 || field.substr(0, key.size()) != key ||
      field[key.size()] != '=') {
    throw DataError("vocabulary: expected header field \"" + std::string(key) +
                    "=\"");
  }
  return field.substr(key.size() + 1);
}

}  // namespace

Vocabulary::Vocabulary(std::vector<VocabularyEntry> entries, size_t cap)
    : entries_(std::move(entries)), cap_(cap) {
  if (cap_ < 1) throw DataError("vocabulary: cap must be >= 1");
  if (entries_.size() > cap_) {
    throw DataError("vocabulary: " + std::to_string(entries_.size()) +
                    " entries exceed cap " + std::to_string(cap_));
  }
  ids_.reserve(entries_.size());
  for (size_t k = 0; k < entries_.size(); ++k) {
    const auto& token = entries_[k].token;
    if (token.empty()) throw DataError("vocabulary: empty token");
    if (token.find_first_of("\t\n\r") != std::string::npos) {
      throw DataError("vocabulary: token contains a tab or newline");
    }
    if (k > 0 && entries_[k].frequency > entries_[k - 1].frequency) {
      throw DataError("vocabulary: frequencies must be non-increasing");
    }
    if (!ids_.emplace(token, static_cast<int32_t>(k + 2)).second) {
      throw DataError("vocabulary: duplicate token \"" + token + "\"");
    }
  }
}

int32_t Vocabulary::Lookup(std::string_view token) const {
  auto it = ids_.find(std::string(token));
  return it == ids_.end() ? 1 : it->second;
}

std::optional<std::string> Vocabulary::Decode(int32_t id) const {
  if (id < 2 || static_cast<size_t>(id - 2) >= entries_.size()) {
    return std::nullopt;
  }
  return entries_[static_cast<size_t>(id - 2)].token;
}

std::string Vocabulary::Serialize() const {
  std::string out = "#vocab v1 size=" + std::to_string(entries_.size()) +
                    " cap=" + std::to_string(cap_) + "\n";
  for (size_t k = 0; k < entries_.size(); ++k) {
    out += entries_[k].token;
    out += '\t';
    out += std::to_string(k + 2);
    out += '\t';
    out += std::to_string(entries_[k].frequency);
    out += '\n';
  }
  return out;
}

Vocabulary Vocabulary::Parse(std::string_view contents) {
  auto lines = SplitOn(contents, '\n');
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty() || lines[0].substr(0, kHeaderPrefix.size()) != kHeaderPrefix) {
    throw DataError("vocabulary: missing \"#vocab\" header");
  }
  auto fields = SplitOn(lines[0].substr(kHeaderPrefix.size()), ' ');
  if (fields.size() != 3) throw DataError("vocabulary: malformed header");
  if (fields[0] != "v1") {
    throw DataError("vocabulary: unsupported version \"" +
                    std::string(fields[0]) + "\"");
  }
  auto size = ParseInt<size_t>(HeaderField(fields[1], "size"), "size");
  auto cap = ParseInt<size_t>(HeaderField(fields[2], "cap"), "cap");
  if (lines.size() - 1 != size) {
    throw DataError("vocabulary: header declares size=" + std::to_string(size) +
                    " but file has " + std::to_string(lines.size() - 1) +
                    " rows");
  }

  std::vector<VocabularyEntry> entries;
  entries.reserve(size);
  for (size_t row = 1; row < lines.size(); ++row) {
    auto line = lines[row];
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    auto cols = SplitOn(line, '\t');
    if (cols.size() != 3) {
      throw DataError("vocabulary: row " + std::to_string(row) +
                      " must have 3 tab-separated columns");
    }
    auto id = ParseInt<int64_t>(cols[1], "id");
    if (id != static_cast<int64_t>(row + 1)) {
      throw DataError("vocabulary: non-contiguous ids (row " +
                      std::to_string(row) + " has id " + std::to_string(id) +
                      ", expected " + std::to_string(row + 1) + ")");
    }
    entries.push_back({std::string(cols[0]),
                       ParseInt<uint64_t>(cols[2], "frequency")});
  }
  return Vocabulary(std::move(entries), cap);
}

std::string Vocabulary::Digest() const {
  std::string bytes = Serialize();
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(),
                 nullptr) != 1) {
    throw Error("SHA-256 digest failed");
  }
  std::string hex;
  hex.reserve(2 * length);
  static constexpr char kHex[] = "0123456789abcdef";
  for (unsigned int i = 0; i < length; ++i) {
    hex += kHex[digest[i] >> 4];
    hex += kHex[digest[i] & 0xf];
  }
  return "sha256:" + hex;
}

void Vocabulary::Save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << Serialize();
  if (!out) throw Error("write failed for " + path.string());
}

Vocabulary Vocabulary::Load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return Parse(buffer.str());
}

void VocabularyBuilder::Add(std::string_view token) {
  auto [it, inserted] = counts_.try_emplace(std::string(token), Count{0, position_});
  it->second.frequency += 1;
  ++position_;
}

void VocabularyBuilder::Add(const std::vector<std::string>& tokens) {
  for (const auto& token : tokens) Add(token);
}

Vocabulary VocabularyBuilder::Build(size_t cap) const {
  if (cap < 1) throw ConfigError("vocabulary cap must be >= 1");
  if (counts_.empty()) {
    throw DataError("cannot build a vocabulary from an empty token stream");
  }
  std::vector<std::pair<const std::string*, Count>> ranked;
  ranked.reserve(counts_.size());
  for (const auto& [token, count] : counts_) ranked.emplace_back(&token, count);
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second.frequency != b.second.frequency) {
      return a.second.frequency > b.second.frequency;
    }
    return a.second.first_seen < b.second.first_seen;
  });
  if (ranked.size() > cap) ranked.resize(cap);
  std::vector<VocabularyEntry> entries;
  entries.reserve(ranked.size());
  for (const auto& [token, count] : ranked) {
    entries.push_back({*token, count.frequency});
  }
  return Vocabulary(std::move(entries), cap);
}

Vocabulary BuildVocabulary(const std::vector<std::string>& tokens, size_t cap) {
  VocabularyBuilder builder;
  builder.Add(tokens);
  return builder.Build(cap);
}

}  // namespace lexseq
