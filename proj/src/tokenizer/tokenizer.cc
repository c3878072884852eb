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

#include "lexseq/tokenizer/tokenizer.h"

#include <unicode/locid.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include <algorithm>

#include "lexseq/common/error.h"
#include "lexseq/tokenizer/vocabulary.h"

namespace lexseq {
namespace {

const icu::Normalizer2& NfcInstance() {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status) || nfc == nullptr) {
    throw Error(std::string("ICU NFC normalizer unavailable: ") +
                u_errorName(status));
  }
  return *nfc;
}

icu::UnicodeString Normalize(const icu::UnicodeString& text) {
  UErrorCode status = U_ZERO_ERROR;
  icu::UnicodeString out = NfcInstance().normalize(text, status);
  if (U_FAILURE(status)) {
    throw Error(std::string("NFC normalization failed: ") + u_errorName(status));
  }
  return out;
}

bool IsBridge(UChar32 c) { return c == '.' || c == '/' || c == '-'; }

}  // namespace

void TokenizerConfig::Validate() const {
  if (max_sequence_length < 1) {
    throw ConfigError("max_sequence_length must be >= 1");
  }
  if (vocabulary_cap < 1) throw ConfigError("vocabulary_cap must be >= 1");
}

std::string NormalizeNfc(std::string_view text) {
  std::string out;
  Normalize(icu::UnicodeString::fromUTF8(
                icu::StringPiece(text.data(), static_cast<int32_t>(text.size()))))
      .toUTF8String(out);
  return out;
}

std::vector<std::string> Tokenize(std::string_view text,
                                  const TokenizerConfig& config) {
  icu::UnicodeString unicode = Normalize(icu::UnicodeString::fromUTF8(
      icu::StringPiece(text.data(), static_cast<int32_t>(text.size()))));
  if (config.lowercase) {
    unicode.toLower(icu::Locale::getRoot());
    // Full case mapping can produce decomposed sequences.
    unicode = Normalize(unicode);
  }

  std::vector<UChar32> chars;
  chars.reserve(static_cast<size_t>(unicode.length()));
  for (int32_t i = 0; i < unicode.length(); i = unicode.moveIndex32(i, 1)) {
    chars.push_back(unicode.char32At(i));
  }

  std::vector<std::string> tokens;
  icu::UnicodeString current;
  auto flush = [&] {
    if (current.isEmpty()) return;
    std::string utf8;
    current.toUTF8String(utf8);
    tokens.push_back(std::move(utf8));
    current.remove();
  };
  for (size_t k = 0; k < chars.size(); ++k) {
    UChar32 c = chars[k];
    bool keep = u_isalnum(c);
    if (!keep && IsBridge(c) && k > 0 && k + 1 < chars.size()) {
      keep = u_isdigit(chars[k - 1]) && u_isdigit(chars[k + 1]);
    }
    if (keep) {
      current.append(c);
    } else {
      flush();
    }
  }
  flush();
  return tokens;
}

EncodedSequence Encode(const std::vector<std::string>& tokens,
                       const Vocabulary& vocab, const TokenizerConfig& config) {
  EncodedSequence seq;
  seq.ids.assign(config.max_sequence_length, kPadId);
  seq.length = std::min(tokens.size(), config.max_sequence_length);
  for (size_t i = 0; i < seq.length; ++i) seq.ids[i] = vocab.Lookup(tokens[i]);
  return seq;
}

}  // namespace lexseq
