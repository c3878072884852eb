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

#ifndef LEXSEQ_COMMON_RANDOM_H_
#define LEXSEQ_COMMON_RANDOM_H_

#include <cstdint>
#include <span>
#include <utility>

namespace lexseq {

// SplitMix64. Every stochastic choice in the toolkit (splits, shuffles,
// initialization) draws from this generator so that results are identical
// across platforms and standard library implementations.
class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t seed) : state_(seed) {}

  uint64_t Next() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Integer in [0, bound) by 128-bit multiply-high (no rejection step).
  uint64_t Below(uint64_t bound) {
    return static_cast<uint64_t>(
        (static_cast<unsigned __int128>(Next()) * bound) >> 64);
  }

  // Double in [0, 1) from the top 53 bits.
  double Uniform() { return static_cast<double>(Next() >> 11) * 0x1.0p-53; }

 private:
  uint64_t state_;
};

// Independent stream seed for a named purpose (split, init, shuffle, ...).
inline uint64_t DeriveSeed(uint64_t seed, uint64_t stream) {
  return SplitMix64(seed ^ (stream * 0xd1342543de82ef95ULL)).Next();
}

enum SeedStream : uint64_t {
  kSplitStream = 1,
  kInitStream = 2,
  kShuffleStream = 3,
};

// Fisher-Yates, walking from the back: for i = n-1..1 swap(i, Below(i+1)).
template <typename T>
void Shuffle(std::span<T> items, SplitMix64& rng) {
  for (size_t i = items.size(); i > 1; --i) {
    size_t j = rng.Below(i);
    using std::swap;
    swap(items[i - 1], items[j]);
  }
}

}  // namespace lexseq

#endif  // LEXSEQ_COMMON_RANDOM_H_
