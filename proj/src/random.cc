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

#include "topdown/random.h"

namespace topdown {

// SplitMix64 finalizer.
uint64_t RandomStream::Mix(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

uint64_t RandomStream::Derive(uint64_t seed,
                              std::initializer_list<uint64_t> path) {
  uint64_t h = Mix(seed);
  for (uint64_t word : path) h = Mix(h ^ Mix(word));
  return h;
}

uint64_t RandomStream::UniformBelow(uint64_t n) {
  if ((n & (n - 1)) == 0) return engine_() & (n - 1);
  // Largest multiple of n representable as 2^64 - r.
  const uint64_t reject_below = (0 - n) % n;
  uint64_t x;
  do {
    x = engine_();
  } while (x < reject_below);
  return x % n;
}

uint128 RandomStream::UniformBelow(uint128 n) {
  if ((n >> 64) == 0) return UniformBelow(static_cast<uint64_t>(n));
  const uint128 reject_below = (uint128{0} - n) % n;
  uint128 x;
  do {
    x = (static_cast<uint128>(engine_()) << 64) | engine_();
  } while (x < reject_below);
  return x % n;
}

}  // namespace topdown
