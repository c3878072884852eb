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

#include "lexseq/extraction/extraction.h"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "lexseq/common/error.h"

namespace lexseq {

std::string_view PageSourceName(PageSource source) {
  return source == PageSource::kEmbedded ? "embedded" : "ocr";
}

ExtractionResult ExtractText(std::span<const PageRecord> pages, OcrBackend* ocr,
                             const QualityGateConfig& gate,
                             const TokenizerConfig& tokenizer,
                             size_t token_target) {
  gate.Validate();
  if (pages.empty()) throw DataError("document has no pages");
  if (token_target < 1) throw ConfigError("token target must be >= 1");

  ExtractionResult result;
  size_t tokens = 0;
  for (const PageRecord& page : pages) {
    const std::string page_name = "page " + std::to_string(page.page_number);
    std::string text;
    PageSource source;
    if (page.embedded_text && AssessQuality(*page.embedded_text, gate).pass) {
      text = *page.embedded_text;
      source = PageSource::kEmbedded;
    } else if (page.image_path) {
      if (ocr == nullptr) {
        throw OcrError(page_name + " needs OCR but no OCR backend is configured");
      }
      try {
        text = ocr->Recognize(*page.image_path);
      } catch (const OcrError& e) {
        throw OcrError(page_name + ": " + e.what());
      }
      source = PageSource::kOcr;
    } else {
      throw DataError(page_name +
                      (page.embedded_text
                           ? " failed the quality gate and has no image"
                           : " has neither embedded text nor an image"));
    }

    if (!result.pages_used.empty()) result.text += '\n';
    result.text += text;
    result.pages_used.push_back({page.page_number, source});
    tokens += Tokenize(text, tokenizer).size();
    if (tokens >= token_target) {
      result.complete = true;
      break;
    }
  }
  result.token_count = Tokenize(result.text, tokenizer).size();
  return result;
}

std::vector<ManifestDocument> LoadPageManifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  const std::filesystem::path base = path.parent_path();

  std::vector<ManifestDocument> docs;
  std::string line;
  size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto where = [&] {
      return path.string() + ":" + std::to_string(line_number) + ": ";
    };
    nlohmann::json object;
    try {
      object = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw DataError(where() + "malformed JSON (" + e.what() + ")");
    }
    if (!object.is_object()) throw DataError(where() + "expected an object");

    PageRecord page;
    auto number = object.find("page");
    if (number == object.end() || !number->is_number_integer() ||
        number->get<int64_t>() < 1) {
      throw DataError(where() + "\"page\" must be a positive integer");
    }
    page.page_number = number->get<size_t>();
    if (auto text = object.find("text"); text != object.end() && !text->is_null()) {
      if (!text->is_string()) throw DataError(where() + "\"text\" must be a string");
      page.embedded_text = text->get<std::string>();
    }
    if (auto image = object.find("image"); image != object.end() && !image->is_null()) {
      if (!image->is_string()) throw DataError(where() + "\"image\" must be a string");
      std::filesystem::path image_path = image->get<std::string>();
      page.image_path = image_path.is_relative() ? base / image_path : image_path;
    }
    if (!page.embedded_text && !page.image_path) {
      throw DataError(where() + "page has neither \"text\" nor \"image\"");
    }

    std::string id = path.stem().string();
    if (auto field = object.find("id"); field != object.end()) {
      if (!field->is_string() || field->get<std::string>().empty()) {
        throw DataError(where() + "\"id\" must be a non-empty string");
      }
      id = field->get<std::string>();
    }
    if (docs.empty() || docs.back().id != id) {
      for (const auto& doc : docs) {
        if (doc.id == id) {
          throw DataError(where() + "pages of document \"" + id +
                          "\" are not contiguous");
        }
      }
      docs.push_back({id, std::nullopt, {}});
    }
    if (auto label = object.find("label"); label != object.end() && !label->is_null()) {
      if (!label->is_string()) throw DataError(where() + "\"label\" must be a string");
      docs.back().label = label->get<std::string>();
    }
    docs.back().pages.push_back(std::move(page));
  }
  return docs;
}

}  // namespace lexseq
