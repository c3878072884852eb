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

#ifndef LEXSEQ_TOKENIZER_TOKENIZER_H_
#define LEXSEQ_TOKENIZER_TOKENIZER_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace lexseq {

class Vocabulary;

struct TokenizerConfig {
  size_t max_sequence_length = 1000;
  size_t vocabulary_cap = 100000;
  bool lowercase = true;

  void Validate() const;
};

// Splits text into tokens. The text is NFC-normalized (and lowercased when
// configured); a token is a maximal run of Unicode letters and decimal
// digits, where '.', '/' and '-' are kept only between two digits so that
// citations like "8.112/90" survive as one token.
std::vector<std::string> Tokenize(std::string_view text,
                                  const TokenizerConfig& config);

// NFC normalization of UTF-8 text.
std::string NormalizeNfc(std::string_view text);

inline constexpr int32_t kPadId = 0;
inline constexpr int32_t kOovId = 1;

// Fixed-capacity id sequence. Positions [0, length) hold ids >= 1, the rest
// are kPadId.
struct EncodedSequence {
  std::vector<int32_t> ids;
  size_t length = 0;

  size_t capacity() const { return ids.size(); }
};

EncodedSequence Encode(const std::vector<std::string>& tokens,
                       const Vocabulary& vocab, const TokenizerConfig& config);

}  // namespace lexseq

#endif  // LEXSEQ_TOKENIZER_TOKENIZER_H_
