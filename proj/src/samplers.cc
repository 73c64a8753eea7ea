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

#include "topdown/samplers.h"

#include <cmath>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace topdown {
namespace {

constexpr int kMaxShift = 40;
constexpr double kMantissaLimit = 0x1.0p40;

uint64_t FloorSqrt(uint64_t v) {
  auto r = static_cast<uint64_t>(std::sqrt(static_cast<double>(v)));
  while (r > 0 && static_cast<uint128>(r) * r > v) --r;
  while (static_cast<uint128>(r + 1) * (r + 1) <= v) ++r;
  return r;
}

// Number of successes of Bernoulli(exp(-1)) before the first failure.
uint64_t GeometricExpMinusOne(RandomStream& rng) {
  uint64_t v = 0;
  while (internal::BernoulliExp(1, 1, rng)) ++v;
  return v;
}

}  // namespace

namespace internal {

bool BernoulliRational(uint128 num, uint128 den, RandomStream& rng) {
  return rng.UniformBelow(den) < num;
}

bool BernoulliExp(uint128 num, uint128 den, RandomStream& rng) {
  if (num <= den) {
    // Pr[first failure at an odd trial] = exp(-gamma), gamma = num/den <= 1,
    // where trial k succeeds with probability gamma / k.
    uint64_t k = 1;
    for (;;) {
      uint128 scaled;
      if (__builtin_mul_overflow(den, static_cast<uint128>(k), &scaled)) break;
      if (!BernoulliRational(num, scaled, rng)) break;
      ++k;
    }
    return k % 2 == 1;
  }
  const uint128 whole = num / den;
  for (uint128 i = 0; i < whole; ++i) {
    if (!BernoulliExp(1, 1, rng)) return false;
  }
  return BernoulliExp(num % den, den, rng);
}

}  // namespace internal

absl::StatusOr<DyadicRational> DyadicRational::FromDouble(double x) {
  if (!(x > 0) || !std::isfinite(x)) {
    return absl::InvalidArgumentError(
        absl::StrCat("parameter must be finite and > 0, got ", x));
  }
  int shift = kMaxShift;
  while (shift > 0 && std::ldexp(x, shift) >= kMantissaLimit) --shift;
  const double scaled = std::nearbyint(std::ldexp(x, shift));
  if (scaled < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("parameter ", x, " is below the representable 2^-40"));
  }
  if (scaled >= 0x1.0p62) {
    return absl::OutOfRangeError(
        absl::StrCat("parameter ", x, " is too large"));
  }
  return DyadicRational{static_cast<uint64_t>(scaled), shift};
}

double DyadicRational::ToDouble() const {
  return std::ldexp(static_cast<double>(num), -shift);
}

absl::StatusOr<DiscreteGaussianSampler> DiscreteGaussianSampler::Create(
    double sigma2) {
  auto variance = DyadicRational::FromDouble(sigma2);
  if (!variance.ok()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "discrete Gaussian variance: ", variance.status().message()));
  }
  const uint64_t t = FloorSqrt(variance->num >> variance->shift) + 1;
  return DiscreteGaussianSampler(*variance, t);
}

int64_t DiscreteGaussianSampler::Sample(RandomStream& rng) const {
  // sigma^2 = n / d with d = 2^shift.
  const uint128 n = variance_.num;
  const int shift = variance_.shift;
  const uint128 t = t_;
  // Acceptance exponent (|Y| - sigma^2/t)^2 / (2 sigma^2) equals
  // (|Y| d t - n)^2 / (2 n d t^2).
  const uint128 den = ((2 * n * t * t) << shift);
  for (;;) {
    const uint64_t u = rng.UniformBelow(t_);
    if (!internal::BernoulliExp(u, t, rng)) continue;
    const uint64_t v = GeometricExpMinusOne(rng);
    uint64_t x;
    if (__builtin_mul_overflow(v, t_, &x) || __builtin_add_overflow(x, u, &x)) {
      continue;
    }
    const bool negative = rng.Bit();
    if (negative && x == 0) continue;

    uint128 scaled;
    if (__builtin_mul_overflow(static_cast<uint128>(x), t, &scaled) ||
        (scaled >> (128 - 1 - shift)) != 0) {
      continue;  // exponent beyond 2^40; acceptance probability ~ 0
    }
    scaled <<= shift;
    const uint128 diff = scaled >= n ? scaled - n : n - scaled;
    uint128 num;
    if (__builtin_mul_overflow(diff, diff, &num)) continue;
    if (internal::BernoulliExp(num, den, rng)) {
      return negative ? -static_cast<int64_t>(x) : static_cast<int64_t>(x);
    }
  }
}

absl::StatusOr<DiscreteLaplaceSampler> DiscreteLaplaceSampler::Create(
    double scale) {
  auto s = DyadicRational::FromDouble(scale);
  if (!s.ok()) {
    return absl::InvalidArgumentError(
        absl::StrCat("discrete Laplace scale: ", s.status().message()));
  }
  return DiscreteLaplaceSampler(*s);
}

int64_t DiscreteLaplaceSampler::Sample(RandomStream& rng) const {
  // Scale num / 2^shift: draw X from a geometric with scale num on a grid,
  // then divide by 2^shift.
  const uint64_t n = scale_.num;
  for (;;) {
    const uint64_t u = rng.UniformBelow(n);
    if (!internal::BernoulliExp(u, n, rng)) continue;
    const uint64_t v = GeometricExpMinusOne(rng);
    uint64_t x;
    if (__builtin_mul_overflow(v, n, &x) || __builtin_add_overflow(x, u, &x)) {
      continue;
    }
    const uint64_t y = x >> scale_.shift;
    const bool negative = rng.Bit();
    if (negative && y == 0) continue;
    return negative ? -static_cast<int64_t>(y) : static_cast<int64_t>(y);
  }
}

absl::StatusOr<int64_t> SampleDiscreteGaussian(double sigma2,
                                               RandomStream& rng) {
  auto sampler = DiscreteGaussianSampler::Create(sigma2);
  if (!sampler.ok()) return sampler.status();
  return sampler->Sample(rng);
}

absl::StatusOr<int64_t> SampleDiscreteLaplace(double scale,
                                              RandomStream& rng) {
  auto sampler = DiscreteLaplaceSampler::Create(scale);
  if (!sampler.ok()) return sampler.status();
  return sampler->Sample(rng);
}

}  // namespace topdown
