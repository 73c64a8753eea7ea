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

// Comparison mechanisms.
//
//  * VanillaGauss noises every cell of the leaf universe independently.
//  * The stability histogram noises only the observed leaf counts with
//    discrete Laplace noise and suppresses anything below a threshold, so it
//    never emits a pair that is absent from the data.
//  * TDA-l2 runs the same top-down descent as InfTDA but solves each parent
//    by Euclidean projection onto {y >= 0, sum y = c} followed by integer
//    rounding.
//  * TDA-linf-random is InfTDA with a uniformly random reduction order.
//
// Leaf-level releases are lifted to every depth with AggregateUp.

#ifndef TOPDOWN_BASELINES_H_
#define TOPDOWN_BASELINES_H_

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "absl/container/flat_hash_map.h"
#include "absl/status/statusor.h"
#include "absl/types/span.h"
#include "topdown/accounting.h"
#include "topdown/hier_tree.h"
#include "topdown/inftda.h"

namespace topdown {

inline constexpr double kDefaultUniverseCap = 1e7;

struct LeafRelease {
  std::string mechanism;
  std::shared_ptr<const PartitionHierarchy> origins;
  std::shared_ptr<const PartitionHierarchy> destinations;
  // Nonzero released leaf counts; VanillaGauss keeps negative values.
  absl::flat_hash_map<uint64_t, int64_t> counts;

  std::vector<std::pair<NodeKey, int64_t>> Sorted() const;
};

absl::StatusOr<LeafRelease> VanillaGauss(
    const HierTree& truth, const PrivacyBudget& budget,
    const SensitivityModel& sensitivity, uint64_t seed,
    Execution execution = Execution::kParallel,
    double universe_cap = kDefaultUniverseCap);

// Requires bounded privacy with one trip per user.
absl::StatusOr<LeafRelease> StabilityHistogram(
    const HierTree& truth, const PrivacyBudget& budget,
    const SensitivityModel& sensitivity, uint64_t seed,
    Execution execution = Execution::kParallel);

absl::StatusOr<DPRelease> TdaL2(const HierTree& truth,
                                const ReleaseConfig& config,
                                Execution execution = Execution::kParallel);

// `config.order` is ignored.
absl::StatusOr<DPRelease> TdaLinfRandom(
    const HierTree& truth, const ReleaseConfig& config,
    Execution execution = Execution::kParallel);

// Euclidean projection of x onto {y >= 0, sum y = c}, c >= 0, by sorting.
std::vector<double> ProjectOntoScaledSimplex(absl::Span<const double> x,
                                             double c);

// The integer child vector used by TDA-l2. The projection is computed in
// exact rational arithmetic: with threshold theta = (S_k - c) / k, where S_k
// is the sum of the k largest entries and k is the largest index with
// k x_(k) > S_k - c, every active entry is (k x_i - S_k + c) / k. All
// active entries therefore share one fractional part; flooring leaves a
// remainder that goes one unit at a time to the largest projected values,
// ties by ascending index, so small entries are the ones rounded to zero.
absl::StatusOr<std::vector<int64_t>> RoundedL2Projection(
    absl::Span<const int64_t> x, int64_t c);

// Sums a leaf release into every depth of a tree of the given mode.
absl::StatusOr<HierTree> AggregateUp(const LeafRelease& release,
                                     TreeMode mode);

}  // namespace topdown

#endif  // TOPDOWN_BASELINES_H_
