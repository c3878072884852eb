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

#ifndef LEXSEQ_TESTS_SUPPORT_SYNTHETIC_CORPUS_H_
#define LEXSEQ_TESTS_SUPPORT_SYNTHETIC_CORPUS_H_

#include <cstdint>
#include <vector>

#include "lexseq/corpus/corpus.h"

namespace lexseq {
namespace testing {

struct SyntheticCorpusOptions {
  size_t docs_per_class = 100;
  size_t min_noise_words = 4;
  size_t max_noise_words = 10;
  uint64_t seed = 20180530;
};

// Keyword corpus under LabelSet::Default(): every document of class k holds
// the marker token "class<k>" once, at a random position among noise words
// drawn from a vocabulary shared by all classes.
std::vector<Document> MakeSyntheticCorpus(
    const SyntheticCorpusOptions& options = {});

}  // namespace testing
}  // namespace lexseq

#endif  // LEXSEQ_TESTS_SUPPORT_SYNTHETIC_CORPUS_H_
