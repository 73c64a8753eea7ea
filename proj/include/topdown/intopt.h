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

// Integer-constrained Chebyshev-distance minimization:
//
//   minimize ||x - y||_inf  subject to  y_i in {0, 1, 2, ...},  sum_i y_i = c.
//
// Writing z = y - x, both solvers start from the smallest-norm offset whose
// entries respect z_i >= -x_i and whose sum is at least c - sum(x), then lower
// entries one at a time, in a chosen index order, never below -t, where t is
// raised only when a full pass cannot meet the sum. The order decides which
// optimum is returned: ascending x zeroes small (likely spurious) entries
// first, descending x protects them.

#ifndef TOPDOWN_INTOPT_H_
#define TOPDOWN_INTOPT_H_

#include <cstdint>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/types/span.h"

namespace topdown {

enum class OrderKind { kAscending, kDescending, kRandom };

std::string_view OrderKindName(OrderKind kind);
absl::StatusOr<OrderKind> ParseOrderKind(std::string_view name);

// Index order in which entries are reduced. Ties in x break by ascending
// index for both sorted orders; kRandom draws a uniform permutation from
// `seed`.
struct ReductionOrder {
  OrderKind kind = OrderKind::kAscending;
  uint64_t seed = 0;
};

struct OptProblem {
  std::vector<int64_t> x;
  int64_t c = 0;
  ReductionOrder order;
};

struct OptSolution {
  std::vector<int64_t> y;
  // Achieved Chebyshev distance ||x - y||_inf.
  int64_t distance = 0;
};

// max(ceil(|c - sum x| / d), -min x), clipped below at 0. Every feasible y
// is at least this far from x.
absl::StatusOr<int64_t> ChebyshevLowerBound(absl::Span<const int64_t> x,
                                            int64_t c);

// The starting offset z_i = max(ceil((c - sum x) / d), -x_i).
absl::StatusOr<std::vector<int64_t>> InitialOffset(
    absl::Span<const int64_t> x, int64_t c);

std::vector<size_t> MakeReductionOrder(absl::Span<const int64_t> x,
                                       const ReductionOrder& order);

// Reference solver: cycles over all indices and raises t by one per pass.
absl::StatusOr<OptSolution> IntOptSimple(const OptProblem& problem);

// Same output as IntOptSimple. Skips entries already at -x_i and raises t by
// max(1, floor(excess / active)) per pass, bounding the work by O(d^2) clip
// steps after the O(d log d) sort.
absl::StatusOr<OptSolution> IntOptFast(const OptProblem& problem);

// Span-based entry point used by the release engine.
absl::StatusOr<OptSolution> IntOptFast(absl::Span<const int64_t> x, int64_t c,
                                       const ReductionOrder& order);

}  // namespace topdown

#endif  // TOPDOWN_INTOPT_H_
