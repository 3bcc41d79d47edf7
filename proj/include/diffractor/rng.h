//
// Copyright 2026 The Diffractor Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef DIFFRACTOR_RNG_H_
#define DIFFRACTOR_RNG_H_

#include <cstdint>
#include <random>

namespace diffractor {

// All randomness in the library flows through this engine. The index
// mechanisms only use the helpers below, not std distributions (whose
// algorithms are implementation-defined), so their outputs for a fixed seed
// do not depend on the standard library.
using Rng = std::mt19937_64;

// SplitMix64 finalizer.
constexpr uint64_t MixBits(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Independent stream `index` of the master seed. Workers that own stream i
// produce the same draws regardless of scheduling.
inline Rng MakeStream(uint64_t master_seed, uint64_t index) {
  std::seed_seq seq{static_cast<uint32_t>(MixBits(master_seed)),
                    static_cast<uint32_t>(MixBits(master_seed) >> 32),
                    static_cast<uint32_t>(MixBits(index ^ 0x5bd1e995ULL)),
                    static_cast<uint32_t>(MixBits(index ^ 0x5bd1e995ULL) >> 32)};
  return Rng(seq);
}

// Uniform double in the open interval (0, 1).
inline double UniformOpen01(Rng& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

// Uniform integer in [0, n). Requires n > 0.
inline uint64_t UniformIndex(Rng& rng, uint64_t n) {
  // Rejection on the largest multiple of n keeps the draw unbiased.
  const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

}  // namespace diffractor

#endif  // DIFFRACTOR_RNG_H_
