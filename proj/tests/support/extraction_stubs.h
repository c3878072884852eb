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

#ifndef LEXSEQ_TESTS_SUPPORT_EXTRACTION_STUBS_H_
#define LEXSEQ_TESTS_SUPPORT_EXTRACTION_STUBS_H_

#include <atomic>
#include <filesystem>
#include <string>
#include <vector>

#include "lexseq/extraction/ocr_backend.h"

namespace lexseq {
namespace testing {

// `count` space-separated Portuguese words; tokenizes to exactly `count`
// tokens and passes the default quality gate once longer than 50 chars.
inline std::string Words(size_t count) {
  static const char* const kWords[] = {"processo", "recurso", "decisão",
                                       "tribunal", "relator", "agravo"};
  std::string out;
  for (size_t i = 0; i < count; ++i) {
    if (i > 0) out += ' ';
    out += kWords[i % 6];
  }
  return out;
}

// Symbol soup that fails the default quality gate.
inline std::string Garbage(size_t count) {
  std::string out;
  for (size_t i = 0; i < count; ++i) out += "@# 1 :: ~ ";
  return out;
}

// Returns a fixed text and records every image it was asked to read.
class RecordingOcr : public OcrBackend {
 public:
  explicit RecordingOcr(std::string text) : text_(std::move(text)) {}

  std::string Recognize(const std::filesystem::path& image) override {
    calls_.push_back(image);
    return text_;
  }

  size_t calls() const { return calls_.size(); }
  const std::vector<std::filesystem::path>& images() const { return calls_; }

 private:
  std::string text_;
  std::vector<std::filesystem::path> calls_;
};

}  // namespace testing
}  // namespace lexseq

#endif  // LEXSEQ_TESTS_SUPPORT_EXTRACTION_STUBS_H_
