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

#include "lexseq/trainer/checkpoint.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "lexseq/common/error.h"

namespace lexseq {
namespace {

constexpr std::string_view kMagic("BLSTM1\0", 7);

void AppendTensor(const Tensor2D<float>& tensor, std::string& out) {
  const size_t offset = out.size();
  out.resize(offset + tensor.size() * sizeof(float));
  char* dst = out.data() + offset;
  if constexpr (std::endian::native == std::endian::little) {
    std::memcpy(dst, tensor.data(), tensor.size() * sizeof(float));
  } else {
    for (size_t k = 0; k < tensor.size(); ++k) {
      uint32_t bits = __builtin_bswap32(std::bit_cast<uint32_t>(tensor[k]));
      std::memcpy(dst + k * sizeof(float), &bits, sizeof(bits));
    }
  }
}

void ReadTensor(std::string_view payload, size_t& offset,
                Tensor2D<float>& tensor) {
  const size_t bytes = tensor.size() * sizeof(float);
  if (payload.size() - offset < bytes) throw DataError("truncated payload");
  std::memcpy(tensor.data(), payload.data() + offset, bytes);
  if constexpr (std::endian::native != std::endian::little) {
    for (float& v : tensor.values()) {
      v = std::bit_cast<float>(__builtin_bswap32(std::bit_cast<uint32_t>(v)));
    }
  }
  offset += bytes;
}

template <typename T>
T Field(const nlohmann::json& header, const char* key) {
  auto it = header.find(key);
  if (it == header.end()) {
    throw DataError(std::string("checkpoint header lacks \"") + key + "\"");
  }
  try {
    return it->get<T>();
  } catch (const nlohmann::json::exception&) {
    throw DataError(std::string("checkpoint header field \"") + key +
                    "\" has the wrong type");
  }
}

}  // namespace

std::string SerializeCheckpoint(const BiLstmClassifier<float>& model,
                                const AdamState* adam) {
  const ModelDims& dims = model.dims();
  const ModelMetadata& meta = model.metadata();
  nlohmann::json header = {
      {"format_version", kCheckpointFormatVersion},
      {"optimizer", "adam"},
      {"activation", std::string(ActivationName(model.activation()))},
      {"dims",
       {{"vocab_rows", dims.vocab_rows},
        {"embed_dim", dims.embed_dim},
        {"hidden", dims.hidden},
        {"classes", dims.classes}}},
      {"labels", meta.labels},
      {"max_sequence_length", meta.max_sequence_length},
      {"lowercase", meta.lowercase},
      {"vocabulary_digest", meta.vocabulary_digest},
      {"split_ratios", meta.split_ratios},
      {"split_seed", meta.split_seed ? nlohmann::json(*meta.split_seed)
                                     : nlohmann::json(nullptr)},
      {"adam_state", adam != nullptr},
      {"adam_step", adam != nullptr ? adam->step : 0},
  };
  std::string out(kMagic);
  out += header.dump();
  out += '\n';
  for (const auto& named : ParameterTensors(model.params())) {
    AppendTensor(*named.tensor, out);
  }
  if (adam != nullptr) {
    for (const auto& named : ParameterTensors(adam->first_moment)) {
      AppendTensor(*named.tensor, out);
    }
    for (const auto& named : ParameterTensors(adam->second_moment)) {
      AppendTensor(*named.tensor, out);
    }
  }
  return out;
}

Checkpoint ParseCheckpoint(std::string_view bytes, const Vocabulary* vocab) {
  if (bytes.size() < kMagic.size() || bytes.substr(0, kMagic.size()) != kMagic) {
    throw DataError("not a checkpoint (bad magic bytes)");
  }
  size_t newline = bytes.find('\n', kMagic.size());
  if (newline == std::string_view::npos) {
    throw DataError("truncated payload (no header terminator)");
  }
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(
        bytes.substr(kMagic.size(), newline - kMagic.size()));
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(std::string("malformed checkpoint header: ") + e.what());
  }
  if (!header.is_object()) throw DataError("malformed checkpoint header");
  int version = Field<int>(header, "format_version");
  if (version != kCheckpointFormatVersion) {
    throw DataError("unsupported checkpoint format version " +
                    std::to_string(version));
  }
  if (Field<std::string>(header, "optimizer") != "adam") {
    throw DataError("unsupported optimizer in checkpoint");
  }

  const auto dims_json = Field<nlohmann::json>(header, "dims");
  ModelDims dims;
  dims.vocab_rows = Field<size_t>(dims_json, "vocab_rows");
  dims.embed_dim = Field<size_t>(dims_json, "embed_dim");
  dims.hidden = Field<size_t>(dims_json, "hidden");
  dims.classes = Field<size_t>(dims_json, "classes");

  Checkpoint checkpoint{
      BiLstmClassifier<float>(
          dims, ParseActivation(Field<std::string>(header, "activation"))),
      std::nullopt};
  ModelMetadata& meta = checkpoint.model.metadata();
  meta.labels = Field<std::vector<std::string>>(header, "labels");
  meta.max_sequence_length = Field<size_t>(header, "max_sequence_length");
  meta.lowercase = Field<bool>(header, "lowercase");
  meta.vocabulary_digest = Field<std::string>(header, "vocabulary_digest");
  meta.split_ratios = Field<std::array<double, 3>>(header, "split_ratios");
  if (!Field<nlohmann::json>(header, "split_seed").is_null()) {
    meta.split_seed = Field<uint64_t>(header, "split_seed");
  }
  if (meta.labels.size() != dims.classes) {
    throw DataError("checkpoint label count does not match its class count");
  }
  if (vocab != nullptr && vocab->Digest() != meta.vocabulary_digest) {
    throw DataError("vocabulary digest mismatch");
  }

  std::string_view payload = bytes.substr(newline + 1);
  size_t offset = 0;
  for (const auto& named : ParameterTensors(checkpoint.model.params())) {
    ReadTensor(payload, offset, *named.tensor);
  }
  if (Field<bool>(header, "adam_state")) {
    AdamState state(dims);
    state.step = Field<uint64_t>(header, "adam_step");
    for (const auto& named : ParameterTensors(state.first_moment)) {
      ReadTensor(payload, offset, *named.tensor);
    }
    for (const auto& named : ParameterTensors(state.second_moment)) {
      ReadTensor(payload, offset, *named.tensor);
    }
    checkpoint.adam = std::move(state);
  }
  if (offset != payload.size()) {
    throw DataError("checkpoint has " + std::to_string(payload.size() - offset) +
                    " unexpected trailing bytes");
  }
  return checkpoint;
}

void SaveCheckpoint(const BiLstmClassifier<float>& model, const AdamState* adam,
                    const std::filesystem::path& path) {
  std::string bytes = SerializeCheckpoint(model, adam);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("write failed for " + path.string());
}

Checkpoint LoadCheckpoint(const std::filesystem::path& path,
                          const Vocabulary* vocab) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ParseCheckpoint(buffer.str(), vocab);
}

}  // namespace lexseq
