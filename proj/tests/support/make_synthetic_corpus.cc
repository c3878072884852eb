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

// Writes the synthetic keyword corpus as corpus.jsonl plus labels.txt.
//
//   make_synthetic_corpus OUTPUT_DIR [DOCS_PER_CLASS]

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "lexseq/common/error.h"
#include "lexseq/corpus/corpus.h"
#include "support/synthetic_corpus.h"

int main(int argc, char** argv) {
  if (argc < 2 || argc > 3) {
    std::cerr << "usage: make_synthetic_corpus OUTPUT_DIR [DOCS_PER_CLASS]\n";
    return 1;
  }
  try {
    const std::filesystem::path dir = argv[1];
    std::filesystem::create_directories(dir);
    lexseq::testing::SyntheticCorpusOptions options;
    if (argc == 3) options.docs_per_class = std::stoul(argv[2]);
    const auto labels = lexseq::LabelSet::Default();
    lexseq::SaveDataset(lexseq::testing::MakeSyntheticCorpus(options), labels,
                        dir / "corpus.jsonl");
    std::ofstream out(dir / "labels.txt");
    for (const auto& name : labels.names()) out << name << "\n";
    if (!out) throw lexseq::Error("cannot write labels.txt");
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
