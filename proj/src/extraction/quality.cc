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

#include <unicode/regex.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include <memory>

#include "lexseq/common/error.h"
#include "lexseq/extraction/extraction.h"

namespace lexseq {
namespace {

// Compiled once; matchers are created per call so concurrent use is safe.
const icu::RegexPattern& WordlikePattern() {
  static const std::unique_ptr<icu::RegexPattern> pattern = [] {
    UErrorCode status = U_ZERO_ERROR;
    UParseError parse_error;
    std::unique_ptr<icu::RegexPattern> compiled(icu::RegexPattern::compile(
        icu::UnicodeString::fromUTF8("\\p{L}{2}"), parse_error, status));
    if (U_FAILURE(status)) {
      throw Error(std::string("cannot compile quality regex: ") +
                  u_errorName(status));
    }
    return compiled;
  }();
  return *pattern;
}

}  // namespace

void QualityGateConfig::Validate() const {
  if (!(min_wordlike_ratio >= 0 && min_wordlike_ratio <= 1)) {
    throw ConfigError("min_wordlike_ratio must lie in [0, 1]");
  }
}

QualityAssessment AssessQuality(std::string_view text,
                                const QualityGateConfig& config) {
  config.Validate();
  icu::UnicodeString unicode = icu::UnicodeString::fromUTF8(
      icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));

  UErrorCode status = U_ZERO_ERROR;
  std::unique_ptr<icu::RegexMatcher> matcher(
      WordlikePattern().matcher(status));
  if (U_FAILURE(status)) throw Error("cannot create quality regex matcher");

  size_t tokens = 0, wordlike = 0;
  int32_t start = -1;
  auto finish_token = [&](int32_t end) {
    if (start < 0) return;
    ++tokens;
    icu::UnicodeString token(unicode, start, end - start);
    matcher->reset(token);
    UErrorCode find_status = U_ZERO_ERROR;
    if (matcher->find(find_status) && U_SUCCESS(find_status)) ++wordlike;
    start = -1;
  };
  for (int32_t i = 0; i < unicode.length(); i = unicode.moveIndex32(i, 1)) {
    if (u_isUWhiteSpace(unicode.char32At(i))) {
      finish_token(i);
    } else if (start < 0) {
      start = i;
    }
  }
  finish_token(unicode.length());

  QualityAssessment out;
  out.score = tokens == 0 ? 0.0
                          : static_cast<double>(wordlike) /
                                static_cast<double>(tokens);
  const auto chars = static_cast<size_t>(unicode.countChar32());
  out.pass = out.score >= config.min_wordlike_ratio && chars >= config.min_chars;
  return out;
}

}  // namespace lexseq
