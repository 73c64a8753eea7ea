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

#include "topdown/accounting.h"

#include <cmath>
#include <numeric>

#include "absl/strings/str_cat.h"

namespace topdown {
namespace {

absl::Status CheckDelta(double delta) {
  if (!(delta > 0 && delta < 1)) {
    return absl::InvalidArgumentError(
        absl::StrCat("delta must be in (0, 1), got ", delta));
  }
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<double> EpsilonFromRho(double rho, double delta) {
  if (!(rho >= 0) || !std::isfinite(rho)) {
    return absl::InvalidArgumentError(
        absl::StrCat("rho must be finite and >= 0, got ", rho));
  }
  if (auto s = CheckDelta(delta); !s.ok()) return s;
  return rho + 2.0 * std::sqrt(rho * std::log(1.0 / delta));
}

absl::StatusOr<double> RhoFromEpsilonDelta(double epsilon, double delta) {
  if (!(epsilon > 0) || !std::isfinite(epsilon)) {
    return absl::InvalidArgumentError(
        absl::StrCat("epsilon must be finite and > 0, got ", epsilon));
  }
  if (auto s = CheckDelta(delta); !s.ok()) return s;
  const double l = std::log(1.0 / delta);
  // (sqrt(l + e) - sqrt(l))^2 written as e^2 / (sqrt(l + e) + sqrt(l))^2,
  // which avoids cancellation for small epsilon.
  const double denom = std::sqrt(l + epsilon) + std::sqrt(l);
  return (epsilon * epsilon) / (denom * denom);
}

absl::StatusOr<PrivacyBudget> PrivacyBudget::FromRho(double rho,
                                                     double delta) {
  if (!(rho > 0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("rho must be > 0, got ", rho));
  }
  auto eps = EpsilonFromRho(rho, delta);
  if (!eps.ok()) return eps.status();
  return PrivacyBudget(rho, *eps, delta, Source::kRho);
}

absl::StatusOr<PrivacyBudget> PrivacyBudget::FromEpsilonDelta(double epsilon,
                                                              double delta) {
  auto rho = RhoFromEpsilonDelta(epsilon, delta);
  if (!rho.ok()) return rho.status();
  return PrivacyBudget(*rho, epsilon, delta, Source::kEpsilonDelta);
}

std::string_view PrivacyTypeName(PrivacyType type) {
  return type == PrivacyType::kBounded ? "bounded" : "unbounded";
}

absl::StatusOr<PrivacyType> ParsePrivacyType(std::string_view name) {
  if (name == "bounded") return PrivacyType::kBounded;
  if (name == "unbounded") return PrivacyType::kUnbounded;
  return absl::InvalidArgumentError(
      absl::StrCat("unknown privacy type '", std::string(name), "'"));
}

absl::Status SensitivityModel::Validate() const {
  if (max_trips < 1 || max_trips > (int64_t{1} << 30)) {
    return absl::InvalidArgumentError(
        absl::StrCat("max trips per user must be in [1, 2^30], got ",
                     max_trips));
  }
  return absl::OkStatus();
}

int64_t SensitivityModel::L2SensitivitySquared() const {
  const int64_t m = max_trips;
  const int64_t base = distinct ? m : m * m;
  return type == PrivacyType::kBounded ? 2 * base : base;
}

absl::Status SensitivityModel::CheckStabilityHistogramSupported() const {
  if (type != PrivacyType::kBounded || max_trips != 1) {
    return absl::FailedPreconditionError(
        "the stability histogram requires bounded privacy with one trip per "
        "user (L1 sensitivity 2)");
  }
  return absl::OkStatus();
}

absl::StatusOr<double> StabilityThreshold(double epsilon, double delta) {
  if (!(epsilon > 0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("epsilon must be > 0, got ", epsilon));
  }
  if (auto s = CheckDelta(delta); !s.ok()) return s;
  return 1.0 + 2.0 * std::log(2.0 / delta) / epsilon;
}

absl::StatusOr<double> PerLevelSigma2(const PrivacyBudget& budget,
                                      const SensitivityModel& sensitivity,
                                      int levels) {
  if (levels < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("tree depth must be >= 1, got ", levels));
  }
  if (auto s = sensitivity.Validate(); !s.ok()) return s;
  return static_cast<double>(sensitivity.L2SensitivitySquared()) *
         static_cast<double>(levels) / (2.0 * budget.rho());
}

absl::Status ZcdpAccountant::Charge(Fraction share) {
  if (share.den <= 0 || share.num < 0) {
    return absl::InvalidArgumentError("budget share must be non-negative");
  }
  const int64_t g = std::gcd(spent_.den, share.den);
  const int64_t lcm_factor = share.den / g;
  int64_t den, a, b, num;
  if (__builtin_mul_overflow(spent_.den, lcm_factor, &den) ||
      __builtin_mul_overflow(spent_.num, lcm_factor, &a) ||
      __builtin_mul_overflow(share.num, spent_.den / g, &b) ||
      __builtin_add_overflow(a, b, &num)) {
    return absl::OutOfRangeError("budget share arithmetic overflows");
  }
  const int64_t r = std::gcd(num, den);
  spent_ = {num / r, den / r};
  return absl::OkStatus();
}

}  // namespace topdown
