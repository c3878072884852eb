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

#include "lexseq/tokenizer/vocabulary.h"

#include <string>
#include <vector>

#include <gmock/gmock.h>
#include <gtest/gtest.h>

#include "lexseq/common/error.h"
#include "lexseq/common/random.h"
#include "lexseq/tokenizer/tokenizer.h"
#include "support/temp_dir.h"

namespace lexseq {
namespace {

using ::testing::ElementsAre;
using ::testing::HasSubstr;

template <typename Fn>
std::string ErrorMessage(Fn fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

TEST(BuildVocabularyTest, CapKeepsMostFrequent) {
  auto vocab = BuildVocabulary({"a", "a", "a", "b", "b", "c"}, 2);
  EXPECT_THAT(vocab.entries(),
              ElementsAre(VocabularyEntry{"a", 3}, VocabularyEntry{"b", 2}));
  EXPECT_EQ(vocab.Lookup("a"), 2);
  EXPECT_EQ(vocab.Lookup("b"), 3);
  EXPECT_EQ(vocab.Lookup("c"), kOovId);
  EXPECT_EQ(vocab.rows(), 4u);
}

TEST(BuildVocabularyTest, TieKeepsFirstOccurrence) {
  auto vocab = BuildVocabulary({"b", "a", "b", "a"}, 1);
  EXPECT_THAT(vocab.entries(), ElementsAre(VocabularyEntry{"b", 2}));
}

TEST(BuildVocabularyTest, CapNotBinding) {
  auto vocab = BuildVocabulary({"v", "w", "x", "y", "z"}, 100);
  ASSERT_EQ(vocab.size(), 5u);
  for (int32_t id = 2; id <= 6; ++id) EXPECT_TRUE(vocab.Decode(id));
  EXPECT_EQ(vocab.Lookup("v"), 2);
  EXPECT_EQ(vocab.Lookup("z"), 6);
}

TEST(BuildVocabularyTest, EmptyStreamRejected) {
  EXPECT_THROW(BuildVocabulary({}, 10), DataError);
}

TEST(BuildVocabularyTest, ZeroCapRejected) {
  EXPECT_THROW(BuildVocabulary({"a"}, 0), ConfigError);
}

TEST(BuildVocabularyTest, StreamingMatchesBatch) {
  std::vector<std::string> stream = {"x", "y", "x", "z", "y", "x", "w"};
  VocabularyBuilder builder;
  builder.Add(std::vector<std::string>(stream.begin(), stream.begin() + 3));
  for (size_t i = 3; i < stream.size(); ++i) builder.Add(stream[i]);
  EXPECT_EQ(builder.Build(3), BuildVocabulary(stream, 3));
}

TEST(VocabularyPropertyTest, CapAndOrdering) {
  SplitMix64 rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::string> stream(1 + rng.Below(300));
    for (auto& t : stream) t = "w" + std::to_string(rng.Below(40));
    const size_t cap = 1 + rng.Below(50);
    auto vocab = BuildVocabulary(stream, cap);
    EXPECT_LE(vocab.size(), cap);
    for (size_t k = 1; k < vocab.size(); ++k) {
      EXPECT_GE(vocab.entries()[k - 1].frequency, vocab.entries()[k].frequency);
    }
    // Frequencies are counts over the stream.
    for (const auto& entry : vocab.entries()) {
      EXPECT_EQ(entry.frequency,
                static_cast<uint64_t>(
                    std::count(stream.begin(), stream.end(), entry.token)));
    }
  }
}

TEST(VocabularyPropertyTest, TiesFollowFirstOccurrence) {
  SplitMix64 rng(22);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::string> stream(1 + rng.Below(100));
    for (auto& t : stream) t = "w" + std::to_string(rng.Below(15));
    auto vocab = BuildVocabulary(stream, 100);
    auto first = [&](const std::string& token) {
      return std::find(stream.begin(), stream.end(), token) - stream.begin();
    };
    for (size_t k = 1; k < vocab.size(); ++k) {
      const auto& a = vocab.entries()[k - 1];
      const auto& b = vocab.entries()[k];
      if (a.frequency == b.frequency) EXPECT_LT(first(a.token), first(b.token));
    }
  }
}

TEST(VocabularyTest, DecodeSpecialsAndRange) {
  auto vocab = BuildVocabulary({"a"}, 5);
  EXPECT_EQ(vocab.Decode(kPadId), std::nullopt);
  EXPECT_EQ(vocab.Decode(kOovId), std::nullopt);
  EXPECT_EQ(vocab.Decode(2), "a");
  EXPECT_EQ(vocab.Decode(3), std::nullopt);
}

TEST(VocabularyTest, RejectsInvalidEntries) {
  EXPECT_THROW(Vocabulary({{"a", 1}, {"a", 1}}, 5), DataError);
  EXPECT_THROW(Vocabulary({{"", 1}}, 5), DataError);
  EXPECT_THROW(Vocabulary({{"a", 1}, {"b", 2}}, 5), DataError);
  EXPECT_THROW(Vocabulary({{"a", 1}, {"b", 1}}, 1), DataError);
}

TEST(VocabularyFileTest, RoundTrip) {
  testing::TempDir dir;
  auto vocab = BuildVocabulary({"a", "a", "a", "b", "b", "c"}, 2);
  vocab.Save(dir.path() / "v.tsv");
  auto loaded = Vocabulary::Load(dir.path() / "v.tsv");
  EXPECT_EQ(loaded, vocab);
  EXPECT_EQ(loaded.Lookup("b"), 3);
  EXPECT_EQ(loaded.Digest(), vocab.Digest());
}

TEST(VocabularyFileTest, Format) {
  auto vocab = BuildVocabulary({"a", "a", "a", "b", "b", "c"}, 2);
  EXPECT_EQ(vocab.Serialize(), "#vocab v1 size=2 cap=2\na\t2\t3\nb\t3\t2\n");
}

TEST(VocabularyFileTest, UnicodeTokensRoundTrip) {
  auto vocab = BuildVocabulary({"acórdão", "8.112/90", "acórdão"}, 10);
  EXPECT_EQ(Vocabulary::Parse(vocab.Serialize()), vocab);
}

TEST(VocabularyFileTest, NonContiguousIds) {
  EXPECT_THAT(ErrorMessage([] {
                Vocabulary::Parse("#vocab v1 size=2 cap=5\na\t2\t3\nb\t4\t2\n");
              }),
              HasSubstr("non-contiguous"));
}

TEST(VocabularyFileTest, SizeMismatch) {
  EXPECT_THROW(
      Vocabulary::Parse("#vocab v1 size=3 cap=5\na\t2\t3\nb\t3\t2\n"),
      DataError);
}

TEST(VocabularyFileTest, VersionMismatch) {
  EXPECT_THROW(Vocabulary::Parse("#vocab v2 size=1 cap=5\na\t2\t3\n"),
               DataError);
}

TEST(VocabularyFileTest, DuplicateToken) {
  EXPECT_THROW(
      Vocabulary::Parse("#vocab v1 size=2 cap=5\na\t2\t3\na\t3\t2\n"),
      DataError);
}

TEST(VocabularyFileTest, MalformedRow) {
  EXPECT_THROW(Vocabulary::Parse("#vocab v1 size=1 cap=5\na\t2\n"),
               DataError);
  EXPECT_THROW(Vocabulary::Parse("#vocab v1 size=1 cap=5\na\t2\tx\n"),
               DataError);
}

TEST(VocabularyTest, DigestIsSha256OfFileForm) {
  // sha256("#vocab v1 size=1 cap=1\na\t2\t1\n"), computed independently.
  auto vocab = BuildVocabulary({"a"}, 1);
  EXPECT_EQ(vocab.Digest(),
            "sha256:"
            "e15f1c1b69a6e7a6cc575ff9fa549088f8ac1c4bc32b0062b6b4e7f6426c8498");
  EXPECT_NE(vocab.Digest(), BuildVocabulary({"b"}, 1).Digest());
}

}  // namespace
}  // namespace lexseq
