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

// Independent brute-force oracles. Nothing here shares code paths with the
// implementations they check.

#ifndef TOPDOWN_TESTS_ORACLES_H_
#define TOPDOWN_TESTS_ORACLES_H_

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/types/span.h"
#include "topdown/hier_tree.h"
#include "topdown/hierarchy.h"
#include "topdown/trips.h"

namespace topdown::testing {

// Minimum of ||x - y||_inf over all non-negative integer y with sum c, by
// enumerating every composition of c into d parts. Requires d <= 4, c <= 12.
absl::StatusOr<int64_t> BruteForceChebyshev(absl::Span<const int64_t> x,
                                            int64_t c);

// Every minimizer of the problem above, in lexicographic order.
absl::StatusOr<std::vector<std::vector<int64_t>>> BruteForceMinimizers(
    absl::Span<const int64_t> x, int64_t c);

// Optimal Chebyshev distance for any size, by binary search on t over the
// feasibility test sum max(0, x_i - t) <= c <= sum (x_i + t), which holds
// iff some non-negative integer y with sum c lies in the box of radius t.
int64_t IntervalChebyshevOptimum(absl::Span<const int64_t> x, int64_t c);

// Counts trips from the raw rows whose origin leaf lies inside
// `origin_code` at `origin_level` and destination leaf inside
// `destination_code` at `destination_level`, reading containment straight
// from the path rows.
int64_t BruteForceRangeCount(
    const std::vector<std::vector<std::string>>& origin_paths,
    const std::vector<std::vector<std::string>>& destination_paths,
    const std::vector<TripRow>& trips, int origin_level,
    const std::string& origin_code, int destination_level,
    const std::string& destination_code);

// Euclidean projection of x onto {y >= 0, sum y = c} by minimizing over a
// grid of step `step` on the simplex (d <= 3).
std::vector<double> GridProjection(absl::Span<const double> x, double c,
                                   double step);

// A random hierarchy with `levels` levels where each area has between
// `min_children` and `max_children` children.
std::vector<std::vector<std::string>> RandomPaths(int levels,
                                                  int min_children,
                                                  int max_children,
                                                  uint64_t seed,
                                                  const std::string& prefix);

// Random trips between leaves of the two path sets.
std::vector<TripRow> RandomTrips(
    const std::vector<std::vector<std::string>>& origin_paths,
    const std::vector<std::vector<std::string>>& destination_paths,
    int rows, int max_count, uint64_t seed);

// Convenience: build a tree straight from path rows and trip rows.
absl::StatusOr<HierTree> TreeFromRows(
    const std::vector<std::vector<std::string>>& origin_paths,
    const std::vector<std::vector<std::string>>& destination_paths,
    const std::vector<TripRow>& trips, TreeMode mode);

}  // namespace topdown::testing

#endif  // TOPDOWN_TESTS_ORACLES_H_
