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

#ifndef LEXSEQ_TRAINER_CHECKPOINT_H_
#define LEXSEQ_TRAINER_CHECKPOINT_H_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "lexseq/nn/bilstm.h"
#include "lexseq/trainer/adam.h"
#include "lexseq/tokenizer/vocabulary.h"

namespace lexseq {

inline constexpr int kCheckpointFormatVersion = 1;

struct Checkpoint {
  BiLstmClassifier<float> model;
  std::optional<AdamState> adam;
};

// Layout: the 7 magic bytes "BLSTM1\0", a one-line JSON header, then the
// parameter tensors as little-endian float32 in ParameterTensors order,
// followed by the Adam first and second moments in the same order when
// present.
std::string SerializeCheckpoint(const BiLstmClassifier<float>& model,
                                const AdamState* adam = nullptr);

// When `vocab` is given, its digest must equal the one in the header.
Checkpoint ParseCheckpoint(std::string_view bytes,
                           const Vocabulary* vocab = nullptr);

void SaveCheckpoint(const BiLstmClassifier<float>& model, const AdamState* adam,
                    const std::filesystem::path& path);
Checkpoint LoadCheckpoint(const std::filesystem::path& path,
                          const Vocabulary* vocab = nullptr);

}  // namespace lexseq

#endif  // LEXSEQ_TRAINER_CHECKPOINT_H_
