// Copyright 2026 The TopDown-OD Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TOPDOWN_RANDOM_H_
#define TOPDOWN_RANDOM_H_

#include <cstdint>
#include <initializer_list>
#include <random>

namespace topdown {

using uint128 = unsigned __int128;

// Stream tags used to key substreams; values are part of the reproducibility
// contract and must not change.
enum class StreamTag : uint64_t {
  kTopDownNode = 1,
  kTopDownRoot = 2,
  kLeafNoise = 3,
  kSynthOrigin = 4,
  kSynthDestination = 5,
  kSynthFlows = 6,
  kRepeat = 7,
  kPermutation = 8,
};

// Deterministic random bit stream. A stream is identified by a root seed and
// a path of 64-bit words (tag, depth, node key, ...); distinct paths give
// independent streams so parallel work is reproducible regardless of the
// order in which streams are consumed.
//
// All integer draws are derived from raw 64-bit engine output by rejection,
// so results are identical across standard library implementations.
class RandomStream {
 public:
  explicit RandomStream(uint64_t seed) : engine_(Mix(seed)) {}
  RandomStream(uint64_t seed, std::initializer_list<uint64_t> path)
      : engine_(Derive(seed, path)) {}

  uint64_t NextU64() { return engine_(); }

  // Uniform on [0, n); n > 0.
  uint64_t UniformBelow(uint64_t n);
  uint128 UniformBelow(uint128 n);

  bool Bit() {
    if (bits_left_ == 0) {
      bits_ = engine_();
      bits_left_ = 64;
    }
    const bool b = bits_ & 1u;
    bits_ >>= 1;
    --bits_left_;
    return b;
  }

  // Uniform double on (0, 1] with 53 random bits.
  double UniformOpenClosed() {
    return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
  }

  static uint64_t Mix(uint64_t x);
  static uint64_t Derive(uint64_t seed, std::initializer_list<uint64_t> path);

 private:
  std::mt19937_64 engine_;
  uint64_t bits_ = 0;
  int bits_left_ = 0;
};

}  // namespace topdown

#endif  // TOPDOWN_RANDOM_H_
