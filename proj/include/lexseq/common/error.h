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

#ifndef LEXSEQ_COMMON_ERROR_H_
#define LEXSEQ_COMMON_ERROR_H_

#include <stdexcept>
#include <string>

namespace lexseq {

// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid configuration values (rejected before any work starts).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Malformed or inconsistent input data: dataset lines, labels, vocabulary
// and checkpoint files, manifests.
class DataError : public Error {
 public:
  using Error::Error;
};

// Non-finite values produced during a forward/backward pass or an update.
class NumericError : public Error {
 public:
  using Error::Error;
};

// Failure reported by an external OCR backend.
class OcrError : public Error {
 public:
  using Error::Error;
};

}  // namespace lexseq

#endif  // LEXSEQ_COMMON_ERROR_H_
