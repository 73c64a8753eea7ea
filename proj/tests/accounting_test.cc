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
#include <random>

#include "gtest/gtest.h"

namespace topdown {
namespace {

// Frozen values from an independent high-precision evaluation of the
// conversion formulas.
constexpr double kRhoEps1Delta1e8 = 0.01321536285282739;
constexpr double kThresholdEps1Delta1e8 = 39.22765584902462;

TEST(AccountingTest, RhoForUnitEpsilon) {
  auto rho = RhoFromEpsilonDelta(1.0, 1e-8);
  ASSERT_TRUE(rho.ok());
  EXPECT_NEAR(*rho, kRhoEps1Delta1e8, 1e-15);
  // Substituting back gives epsilon = 1.
  EXPECT_NEAR(*rho + 2 * std::sqrt(*rho * std::log(1e8)), 1.0, 1e-12);
}

TEST(AccountingTest, RoundTripOnRandomBudgets) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> log_eps(std::log(1e-3), std::log(50.0));
  std::uniform_real_distribution<double> log_delta(std::log(1e-12), std::log(1e-2));
  for (int i = 0; i < 1000; ++i) {
    const double eps = std::exp(log_eps(rng));
    const double delta = std::exp(log_delta(rng));
    auto rho = RhoFromEpsilonDelta(eps, delta);
    ASSERT_TRUE(rho.ok());
    auto back = EpsilonFromRho(*rho, delta);
    ASSERT_TRUE(back.ok());
    EXPECT_NEAR(*back, eps, 1e-9 * std::max(1.0, eps));
  }
}

TEST(AccountingTest, BudgetFactoriesAgree) {
  auto a = PrivacyBudget::FromEpsilonDelta(1.0, 1e-8);
  ASSERT_TRUE(a.ok());
  auto b = PrivacyBudget::FromRho(a->rho(), 1e-8);
  ASSERT_TRUE(b.ok());
  EXPECT_NEAR(b->epsilon(), 1.0, 1e-12);
  EXPECT_EQ(a->source(), PrivacyBudget::Source::kEpsilonDelta);
  EXPECT_EQ(b->source(), PrivacyBudget::Source::kRho);
}

TEST(AccountingTest, RejectsInvalidBudgets) {
  EXPECT_FALSE(RhoFromEpsilonDelta(0, 1e-8).ok());
  EXPECT_FALSE(RhoFromEpsilonDelta(1, 0).ok());
  EXPECT_FALSE(RhoFromEpsilonDelta(1, 1).ok());
  EXPECT_FALSE(RhoFromEpsilonDelta(NAN, 1e-8).ok());
  EXPECT_FALSE(PrivacyBudget::FromRho(0).ok());
  EXPECT_FALSE(PrivacyBudget::FromRho(-1).ok());
  EXPECT_FALSE(EpsilonFromRho(INFINITY, 1e-8).ok());
}

TEST(SensitivityTest, L2SensitivityByModel) {
  EXPECT_EQ((SensitivityModel{PrivacyType::kBounded, 3, true}).L2SensitivitySquared(), 6);
  EXPECT_EQ((SensitivityModel{PrivacyType::kUnbounded, 3, true}).L2SensitivitySquared(), 3);
  EXPECT_EQ((SensitivityModel{PrivacyType::kBounded, 3, false}).L2SensitivitySquared(), 18);
  EXPECT_EQ((SensitivityModel{PrivacyType::kUnbounded, 3, false}).L2SensitivitySquared(), 9);
  EXPECT_FALSE((SensitivityModel{PrivacyType::kBounded, 0, true}).Validate().ok());
}

TEST(SensitivityTest, StabilityHistogramOnlyForBoundedSingleTrip) {
  EXPECT_TRUE(SensitivityModel{}.CheckStabilityHistogramSupported().ok());
  EXPECT_EQ((SensitivityModel{PrivacyType::kUnbounded, 1, true})
                .CheckStabilityHistogramSupported()
                .code(),
            absl::StatusCode::kFailedPrecondition);
  EXPECT_FALSE((SensitivityModel{PrivacyType::kBounded, 2, true})
                   .CheckStabilityHistogramSupported()
                   .ok());
}

TEST(AccountingTest, PerLevelVarianceExamples) {
  auto rho1 = PrivacyBudget::FromRho(1.0);
  auto rho2 = PrivacyBudget::FromRho(2.0);
  ASSERT_TRUE(rho1.ok() && rho2.ok());
  EXPECT_DOUBLE_EQ(*PerLevelSigma2(*rho1, {PrivacyType::kBounded, 1, true}, 6), 6.0);
  EXPECT_DOUBLE_EQ(*PerLevelSigma2(*rho1, {PrivacyType::kUnbounded, 1, true}, 6), 3.0);
  EXPECT_DOUBLE_EQ(*PerLevelSigma2(*rho2, {PrivacyType::kBounded, 2, true}, 4), 4.0);
  EXPECT_FALSE(PerLevelSigma2(*rho1, {}, 0).ok());
}

TEST(AccountingTest, PerLevelVarianceAtUnitEpsilonDepth16) {
  auto b = PrivacyBudget::FromEpsilonDelta(1.0, 1e-8);
  ASSERT_TRUE(b.ok());
  EXPECT_NEAR(*PerLevelSigma2(*b, {}, 16), 1210.7121218072982, 1e-8);
}

TEST(AccountingTest, StabilityThreshold) {
  EXPECT_NEAR(*StabilityThreshold(1.0, 1e-8), kThresholdEps1Delta1e8, 1e-12);
  // A true count of 30 needs noise above this to survive.
  EXPECT_NEAR(*StabilityThreshold(1.0, 1e-8) - 30, 9.227655849024622, 1e-12);
  EXPECT_FALSE(StabilityThreshold(0, 1e-8).ok());
}

TEST(ZcdpAccountantTest, SharesComposeExactly) {
  ZcdpAccountant acc(0.5);
  for (int i = 0; i < 16; ++i) ASSERT_TRUE(acc.Charge({1, 16}).ok());
  EXPECT_EQ(acc.spent_share(), (Fraction{1, 1}));
  EXPECT_DOUBLE_EQ(acc.spent_rho(), 0.5);
  ASSERT_TRUE(acc.Charge({1, 32}).ok());
  EXPECT_EQ(acc.spent_share(), (Fraction{33, 32}));
  EXPECT_FALSE(acc.Charge({1, 0}).ok());
  EXPECT_FALSE(acc.Charge({-1, 2}).ok());
}

}  // namespace
}  // namespace topdown
