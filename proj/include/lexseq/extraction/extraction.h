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

#ifndef LEXSEQ_EXTRACTION_EXTRACTION_H_
#define LEXSEQ_EXTRACTION_EXTRACTION_H_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lexseq/extraction/ocr_backend.h"
#include "lexseq/tokenizer/tokenizer.h"

namespace lexseq {

struct PageRecord {
  size_t page_number = 1;  // 1-based
  std::optional<std::string> embedded_text;
  std::optional<std::filesystem::path> image_path;
};

struct QualityGateConfig {
  double min_wordlike_ratio = 0.70;
  size_t min_chars = 50;

  void Validate() const;
};

struct QualityAssessment {
  double score = 0;
  bool pass = false;
};

// score = fraction of whitespace-separated tokens containing two consecutive
// letters (regex \p{L}{2}); pass requires score >= min_wordlike_ratio and at
// least min_chars code points.
QualityAssessment AssessQuality(std::string_view text,
                                const QualityGateConfig& config);

enum class PageSource { kEmbedded, kOcr };

std::string_view PageSourceName(PageSource source);

struct PageUse {
  size_t page_number = 0;
  PageSource source = PageSource::kEmbedded;

  bool operator==(const PageUse&) const = default;
};

struct ExtractionResult {
  std::string text;  // accepted page texts joined by '\n'
  std::vector<PageUse> pages_used;
  size_t token_count = 0;
  bool complete = false;  // token_target reached before pages ran out
};

// Walks pages in order. Embedded text that passes the gate is used as is;
// failing or missing embedded text is replaced by the OCR output for the
// page image. Stops once the accumulated token count reaches token_target.
// `ocr` may be null if no page ends up needing it.
ExtractionResult ExtractText(std::span<const PageRecord> pages, OcrBackend* ocr,
                             const QualityGateConfig& gate,
                             const TokenizerConfig& tokenizer,
                             size_t token_target = 1000);

struct ManifestDocument {
  std::string id;
  std::optional<std::string> label;
  std::vector<PageRecord> pages;
};

// Page manifest: JSON Lines with `page` (integer), optional `text` and
// optional `image`. Lines may carry `id` (and `label`) to hold several
// documents; consecutive lines with the same id form one document. Without
// ids the whole file is one document named after the file stem. Relative
// image paths resolve against the manifest's directory.
std::vector<ManifestDocument> LoadPageManifest(const std::filesystem::path& path);

}  // namespace lexseq

#endif  // LEXSEQ_EXTRACTION_EXTRACTION_H_
