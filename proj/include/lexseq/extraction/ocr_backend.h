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

#ifndef LEXSEQ_EXTRACTION_OCR_BACKEND_H_
#define LEXSEQ_EXTRACTION_OCR_BACKEND_H_

#include <filesystem>
#include <memory>
#include <string_view>
#include <string>

namespace lexseq {

// Turns one page image into text. Implementations throw OcrError on failure.
// CommandOcrBackend is safe for concurrent use.
class OcrBackend {
 public:
  virtual ~OcrBackend() = default;
  virtual std::string Recognize(const std::filesystem::path& image) = 0;
};

// Runs an external command per page, e.g. "tesseract {input} stdout". The
// `{input}` placeholder is replaced by the shell-quoted image path; the
// command runs under /bin/sh and its standard output is the page text.
class CommandOcrBackend : public OcrBackend {
 public:
  static constexpr std::string_view kPlaceholder = "{input}";

  explicit CommandOcrBackend(std::string command_template);

  std::string Recognize(const std::filesystem::path& image) override;

  const std::string& command_template() const { return template_; }

 private:
  std::string template_;
};

std::unique_ptr<OcrBackend> MakeCommandOcrBackend(std::string command_template);

// Output of a finished child process.
struct CommandOutput {
  int exit_code = 0;  // 128 + signal number when killed by a signal
  std::string stdout_text;
  std::string stderr_text;
};

CommandOutput RunShellCommand(const std::string& command);

std::string ShellQuote(std::string_view text);

}  // namespace lexseq

#endif  // LEXSEQ_EXTRACTION_OCR_BACKEND_H_
