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

#include "topdown/intopt.h"

#include <algorithm>
#include <chrono>
#include <limits>
#include <numeric>
#include <random>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "oracles.h"

namespace topdown {
namespace {

using ::testing::Contains;
using ::testing::ElementsAre;
using ::topdown::testing::BruteForceChebyshev;
using ::topdown::testing::BruteForceMinimizers;
using ::topdown::testing::IntervalChebyshevOptimum;

constexpr OrderKind kAllOrders[] = {OrderKind::kAscending,
                                    OrderKind::kDescending, OrderKind::kRandom};

OptSolution Solve(std::vector<int64_t> x, int64_t c, OrderKind kind,
                  uint64_t seed = 0) {
  auto s = IntOptFast(OptProblem{std::move(x), c, {kind, seed}});
  EXPECT_TRUE(s.ok()) << s.status();
  return *s;
}

void ExpectFeasible(const std::vector<int64_t>& y, int64_t c) {
  EXPECT_EQ(std::accumulate(y.begin(), y.end(), int64_t{0}), c);
  for (int64_t v : y) EXPECT_GE(v, 0);
}

TEST(IntOptTest, SmallEntriesAreZeroedFirst) {
  const OptSolution s = Solve({0, -1, 1}, 2, OrderKind::kAscending);
  EXPECT_THAT(s.y, ElementsAre(0, 0, 2));
  EXPECT_EQ(s.distance, 1);
  EXPECT_EQ(*ChebyshevLowerBound(std::vector<int64_t>{0, -1, 1}, 2), 1);
}

TEST(IntOptTest, DescendingOrderKeepsSmallEntries) {
  const OptSolution s = Solve({0, -1, 1}, 2, OrderKind::kDescending);
  EXPECT_THAT(s.y, ElementsAre(1, 0, 1));
  EXPECT_EQ(s.distance, 1);
}

TEST(IntOptTest, NegativeEntryForcesLargeDistance) {
  const OptSolution s = Solve({-2, 5}, 1, OrderKind::kAscending);
  EXPECT_THAT(s.y, ElementsAre(0, 1));
  EXPECT_EQ(s.distance, 4);
  // The lower bound is not tight here.
  EXPECT_EQ(*ChebyshevLowerBound(std::vector<int64_t>{-2, 5}, 1), 2);
}

TEST(IntOptTest, InitialOffset) {
  EXPECT_THAT(*InitialOffset(std::vector<int64_t>{0, -1, 1}, 2),
              ElementsAre(1, 1, 1));
  EXPECT_THAT(*InitialOffset(std::vector<int64_t>{-2, 5}, 1),
              ElementsAre(2, -1));
}

TEST(IntOptTest, EdgeCases) {
  EXPECT_THAT(Solve({7}, 3, OrderKind::kAscending).y, ElementsAre(3));
  EXPECT_EQ(Solve({7}, 3, OrderKind::kAscending).distance, 4);
  EXPECT_THAT(Solve({4, -3, 9}, 0, OrderKind::kAscending).y,
              ElementsAre(0, 0, 0));
  EXPECT_THAT(Solve({2, 3}, 5, OrderKind::kAscending).y, ElementsAre(2, 3));
  EXPECT_THAT(Solve({0, 0, 0, 0}, 4, OrderKind::kAscending).y,
              ElementsAre(1, 1, 1, 1));
}

TEST(IntOptTest, RejectsInvalidInput) {
  EXPECT_FALSE(IntOptFast(OptProblem{{}, 1, {}}).ok());
  EXPECT_FALSE(IntOptFast(OptProblem{{1, 2}, -1, {}}).ok());
  EXPECT_FALSE(IntOptSimple(OptProblem{{}, 0, {}}).ok());
  constexpr int64_t kMin = std::numeric_limits<int64_t>::min();
  constexpr int64_t kMax = std::numeric_limits<int64_t>::max();
  EXPECT_EQ(IntOptFast(OptProblem{{kMin, 1}, 1, {}}).status().code(),
            absl::StatusCode::kOutOfRange);
  EXPECT_EQ(IntOptFast(OptProblem{{kMax, kMax}, 1, {}}).status().code(),
            absl::StatusCode::kOutOfRange);
}

TEST(IntOptTest, ExhaustivelyOptimalOnSmallGrid) {
  for (int d = 1; d <= 4; ++d) {
    const int values = d == 4 ? 5 : 7;  // {-2..2} for d = 4
    const int offset = d == 4 ? 2 : 3;
    int combos = 1;
    for (int i = 0; i < d; ++i) combos *= values;
    for (int code = 0; code < combos; ++code) {
      std::vector<int64_t> x(d);
      for (int i = 0, r = code; i < d; ++i, r /= values) x[i] = r % values - offset;
      for (int64_t c = 0; c <= (d == 4 ? 5 : 6); ++c) {
        const auto minimizers = *BruteForceMinimizers(x, c);
        const int64_t best = *BruteForceChebyshev(x, c);
        for (OrderKind kind : kAllOrders) {
          for (uint64_t seed : {0u, 1u}) {
            auto s = IntOptSimple(OptProblem{x, c, {kind, seed}});
            ASSERT_TRUE(s.ok());
            EXPECT_EQ(s->distance, best);
            EXPECT_THAT(minimizers, Contains(s->y));
            ExpectFeasible(s->y, c);
            EXPECT_GE(s->distance, *ChebyshevLowerBound(x, c));
          }
        }
      }
    }
  }
}

TEST(IntOptTest, FastMatchesSimpleOnRandomInstances) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> dim(1, 50);
  std::uniform_int_distribution<int64_t> entry(-20, 20);
  std::uniform_int_distribution<int64_t> target(0, 200);
  std::uniform_int_distribution<int> kind(0, 2);
  for (int i = 0; i < 10000; ++i) {
    std::vector<int64_t> x(dim(rng));
    for (auto& v : x) v = entry(rng);
    const OptProblem p{x, target(rng),
                       {kAllOrders[kind(rng)], static_cast<uint64_t>(i)}};
    auto fast = IntOptFast(p);
    auto simple = IntOptSimple(p);
    ASSERT_TRUE(fast.ok() && simple.ok());
    ASSERT_EQ(fast->y, simple->y) << "instance " << i;
    EXPECT_EQ(fast->distance, IntervalChebyshevOptimum(x, p.c));
  }
}

TEST(IntOptTest, OptimalOnWideRangeInstances) {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int64_t> entry(-1000000, 1000000000);
  std::uniform_int_distribution<int64_t> target(0, int64_t{1} << 40);
  for (int i = 0; i < 200; ++i) {
    std::vector<int64_t> x(1 + i * 5);
    for (auto& v : x) v = entry(rng);
    const int64_t c = target(rng);
    for (OrderKind kind : kAllOrders) {
      const OptSolution s = Solve(x, c, kind, i);
      ExpectFeasible(s.y, c);
      EXPECT_EQ(s.distance, IntervalChebyshevOptimum(x, c));
    }
  }
}

TEST(IntOptTest, FastSolverScalesToLargeVectors) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int64_t> entry(-50, 50);
  std::vector<int64_t> x(200000);
  for (auto& v : x) v = entry(rng);
  const auto start = std::chrono::steady_clock::now();
  const OptSolution s = Solve(x, 3, OrderKind::kAscending);
  const double secs = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - start)
                          .count();
  ExpectFeasible(s.y, 3);
  EXPECT_EQ(s.distance, IntervalChebyshevOptimum(x, 3));
  EXPECT_LT(secs, 5.0);
}

TEST(ReductionOrderTest, SortedOrdersBreakTiesByIndex) {
  const std::vector<int64_t> x = {3, 1, 3, 1, 2};
  EXPECT_THAT(MakeReductionOrder(x, {OrderKind::kAscending, 0}),
              ElementsAre(1, 3, 4, 0, 2));
  EXPECT_THAT(MakeReductionOrder(x, {OrderKind::kDescending, 0}),
              ElementsAre(0, 2, 4, 1, 3));
}

TEST(ReductionOrderTest, RandomOrderIsASeededPermutation) {
  const std::vector<int64_t> x(20, 0);
  auto a = MakeReductionOrder(x, {OrderKind::kRandom, 1});
  EXPECT_EQ(a, MakeReductionOrder(x, {OrderKind::kRandom, 1}));
  EXPECT_NE(a, MakeReductionOrder(x, {OrderKind::kRandom, 2}));
  std::sort(a.begin(), a.end());
  for (size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i], i);
}

TEST(ReductionOrderTest, ParsesNames) {
  EXPECT_EQ(*ParseOrderKind("asc"), OrderKind::kAscending);
  EXPECT_EQ(*ParseOrderKind("descending"), OrderKind::kDescending);
  EXPECT_EQ(*ParseOrderKind("random"), OrderKind::kRandom);
  EXPECT_FALSE(ParseOrderKind("sideways").ok());
  EXPECT_EQ(OrderKindName(OrderKind::kDescending), "desc");
}

}  // namespace
}  // namespace topdown
