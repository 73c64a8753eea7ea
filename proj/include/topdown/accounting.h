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

#ifndef TOPDOWN_ACCOUNTING_H_
#define TOPDOWN_ACCOUNTING_H_

#include <cstdint>
#include <string_view>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace topdown {

// zCDP -> (epsilon, delta)-DP: epsilon = rho + 2 sqrt(rho ln(1/delta)).
// rho >= 0, delta in (0, 1). Logarithms are natural throughout.
absl::StatusOr<double> EpsilonFromRho(double rho, double delta);

// Inverse of EpsilonFromRho:
//   rho = (sqrt(ln(1/delta) + epsilon) - sqrt(ln(1/delta)))^2.
absl::StatusOr<double> RhoFromEpsilonDelta(double epsilon, double delta);

// A total privacy budget. Either rho or (epsilon, delta) was given by the
// caller; the other representation is derived.
class PrivacyBudget {
 public:
  enum class Source { kRho, kEpsilonDelta };

  static absl::StatusOr<PrivacyBudget> FromRho(double rho,
                                               double delta = 1e-8);
  static absl::StatusOr<PrivacyBudget> FromEpsilonDelta(double epsilon,
                                                        double delta);

  double rho() const { return rho_; }
  double epsilon() const { return epsilon_; }
  double delta() const { return delta_; }
  Source source() const { return source_; }

 private:
  PrivacyBudget(double rho, double epsilon, double delta, Source source)
      : rho_(rho), epsilon_(epsilon), delta_(delta), source_(source) {}

  double rho_;
  double epsilon_;
  double delta_;
  Source source_;
};

enum class PrivacyType { kBounded, kUnbounded };

std::string_view PrivacyTypeName(PrivacyType type);
absl::StatusOr<PrivacyType> ParsePrivacyType(std::string_view name);

// How much one user can change the histogram of O/D pairs.
struct SensitivityModel {
  PrivacyType type = PrivacyType::kBounded;
  // Maximum number of trips contributed by one user.
  int64_t max_trips = 1;
  // Whether a user's trips are distinct O/D pairs.
  bool distinct = true;

  absl::Status Validate() const;

  // GS_2^2: 2m (bounded, distinct), m (unbounded, distinct),
  // 2m^2 (bounded, repeated) or m^2 (unbounded, repeated).
  int64_t L2SensitivitySquared() const;

  // The stability histogram is only calibrated for GS_1 = 2, i.e. bounded
  // privacy with one trip per user.
  absl::Status CheckStabilityHistogramSupported() const;
};

// Threshold of the stability histogram: 1 + 2 ln(2/delta) / epsilon.
absl::StatusOr<double> StabilityThreshold(double epsilon, double delta);

// Discrete Gaussian variance for one level of a T-level top-down release so
// that the T levels together consume exactly `budget.rho()`:
//   sigma^2 = GS_2^2 * T / (2 rho).
absl::StatusOr<double> PerLevelSigma2(const PrivacyBudget& budget,
                                      const SensitivityModel& sensitivity,
                                      int levels);

// An exact non-negative rational, used to book budget shares.
struct Fraction {
  int64_t num = 0;
  int64_t den = 1;

  double ToDouble() const {
    return static_cast<double>(num) / static_cast<double>(den);
  }
  friend bool operator==(const Fraction&, const Fraction&) = default;
};

// Tracks zCDP consumption as exact fractions of a total rho. zCDP composes
// additively, so the spent share is the sum of the charged shares.
class ZcdpAccountant {
 public:
  explicit ZcdpAccountant(double total_rho) : total_rho_(total_rho) {}

  absl::Status Charge(Fraction share);

  Fraction spent_share() const { return spent_; }
  double spent_rho() const { return total_rho_ * spent_.ToDouble(); }
  double total_rho() const { return total_rho_; }

 private:
  double total_rho_;
  Fraction spent_{0, 1};
};

}  // namespace topdown

#endif  // TOPDOWN_ACCOUNTING_H_
