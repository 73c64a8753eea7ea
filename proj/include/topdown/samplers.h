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

// Exact samplers for integer-valued noise.
//
// Both samplers work on a dyadic rational parameter num / 2^shift obtained by
// rounding the requested double to 40 significant bits; every random decision
// after that is an exact rational Bernoulli trial driven by uniform integers,
// following the rejection scheme of Canonne, Kamath and Steinke (2020):
// discrete Laplace from a geometric envelope, discrete Gaussian by rejection
// from a discrete Laplace envelope. No floating-point value takes part in any
// accept/reject comparison.

#ifndef TOPDOWN_SAMPLERS_H_
#define TOPDOWN_SAMPLERS_H_

#include <cstdint>

#include "absl/status/statusor.h"
#include "topdown/random.h"

namespace topdown {

// x ~= num / 2^shift with num < 2^40 (or shift == 0).
struct DyadicRational {
  uint64_t num = 0;
  int shift = 0;

  static absl::StatusOr<DyadicRational> FromDouble(double x);
  double ToDouble() const;
};

// Samples Z with Pr[Z = z] proportional to exp(-z^2 / (2 sigma^2)), z in Z.
class DiscreteGaussianSampler {
 public:
  static absl::StatusOr<DiscreteGaussianSampler> Create(double sigma2);

  int64_t Sample(RandomStream& rng) const;

  // The variance parameter actually used (the dyadic rounding of sigma2).
  double sigma2() const { return variance_.ToDouble(); }

 private:
  explicit DiscreteGaussianSampler(DyadicRational variance, uint64_t t)
      : variance_(variance), t_(t) {}

  DyadicRational variance_;
  // Scale of the discrete Laplace envelope, floor(sigma) + 1.
  uint64_t t_;
};

// Samples Z with Pr[Z = z] proportional to exp(-|z| / scale), z in Z.
class DiscreteLaplaceSampler {
 public:
  static absl::StatusOr<DiscreteLaplaceSampler> Create(double scale);

  int64_t Sample(RandomStream& rng) const;

  double scale() const { return scale_.ToDouble(); }

 private:
  explicit DiscreteLaplaceSampler(DyadicRational scale) : scale_(scale) {}

  DyadicRational scale_;
};

// One-shot convenience wrappers.
absl::StatusOr<int64_t> SampleDiscreteGaussian(double sigma2,
                                               RandomStream& rng);
absl::StatusOr<int64_t> SampleDiscreteLaplace(double scale, RandomStream& rng);

namespace internal {

// Bernoulli(num / den) for 0 <= num <= den, den > 0.
bool BernoulliRational(uint128 num, uint128 den, RandomStream& rng);

// Bernoulli(exp(-num / den)) for num >= 0, den > 0.
bool BernoulliExp(uint128 num, uint128 den, RandomStream& rng);

}  // namespace internal
}  // namespace topdown

#endif  // TOPDOWN_SAMPLERS_H_
