// Copyright 2026 The Clutterpush Authors
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

#ifndef CLUTTERPUSH_RANDOM_H_
#define CLUTTERPUSH_RANDOM_H_

#include <cstdint>
#include <random>
#include <string_view>

namespace clutterpush {

using Rng = std::mt19937_64;

// 64-bit FNV-1a over a byte string. Stable across platforms; used for
// config digests and seed derivation.
constexpr std::uint64_t Fnv1a64(std::string_view bytes,
                                std::uint64_t hash = 0xcbf29ce484222325ull) {
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ull;
  }
  return hash;
}

constexpr std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Independent stream seed for (base seed, purpose tag, index...). Every
// randomized sub-computation draws its generator from here so that results
// do not depend on execution order or thread count.
constexpr std::uint64_t DeriveSeed(std::uint64_t base, std::string_view tag,
                                   std::uint64_t i = 0, std::uint64_t j = 0) {
  std::uint64_t h = SplitMix64(base ^ Fnv1a64(tag));
  h = SplitMix64(h ^ SplitMix64(i + 0x632be59bd9b4e019ull));
  return SplitMix64(h ^ SplitMix64(j + 0x85157af5ull));
}

inline double Uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int UniformInt(Rng& rng, int lo, int hi_inclusive) {
  return std::uniform_int_distribution<int>(lo, hi_inclusive)(rng);
}

}  // namespace clutterpush

#endif  // CLUTTERPUSH_RANDOM_H_
