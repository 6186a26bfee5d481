// Copyright 2026 The linbandit Authors. All rights reserved.
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

#ifndef LINBANDIT_RANDOM_HPP_
#define LINBANDIT_RANDOM_HPP_

#include <cstdint>
#include <random>

namespace linbandit {

// Every stochastic component draws from a 64-bit Mersenne twister. Streams
// are derived from (seed, stream id) so that the environment and the policy
// of one run never share state.
using Rng = std::mt19937_64;

enum class Stream : std::uint64_t {
  kEnvironment = 1,
  kPolicy = 2,
  kInstance = 3,
};

inline Rng MakeRng(std::uint64_t seed, Stream stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream)};
  return Rng(seq);
}

// Uniform double in [0, 1) built from the top 53 bits of one draw. Unlike
// std::uniform_real_distribution this is bit-for-bit the same on every
// standard library.
inline double Uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Unbiased integer in [0, n) by rejection.
inline std::uint64_t UniformIndex(Rng& rng, std::uint64_t n) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t v;
  do {
    v = rng();
  } while (v >= limit);
  return v % n;
}

}  // namespace linbandit

#endif  // LINBANDIT_RANDOM_HPP_
