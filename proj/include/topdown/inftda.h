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

// Top-down release of a hierarchical O/D tree.
//
// Starting from the root, every released parent with count c > 0 noises the
// true counts of its full child universe with discrete Gaussian noise and
// replaces them by a non-negative integer vector summing to c. Only positive
// children survive, so a zero parent prunes its whole subtree. Under bounded
// privacy the root is the public total n; under unbounded privacy it is
// noised as well and clamped at zero.
//
// Each parent draws from its own substream keyed by (seed, depth, key), so
// the released tree does not depend on the number of threads.

#ifndef TOPDOWN_INFTDA_H_
#define TOPDOWN_INFTDA_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/types/span.h"
#include "nlohmann/json.hpp"
#include "topdown/accounting.h"
#include "topdown/hier_tree.h"
#include "topdown/intopt.h"
#include "topdown/random.h"

namespace topdown {

struct ReleaseConfig {
  PrivacyBudget budget;
  // Its `type` selects bounded or unbounded release.
  SensitivityModel sensitivity;
  OrderKind order = OrderKind::kAscending;
  uint64_t seed = 0;
};

struct LevelStats {
  size_t node_count = 0;
  double wall_ms = 0;
};

struct ReleaseMetadata {
  std::string mechanism;
  TreeMode tree = TreeMode::kDestination;
  PrivacyType mode = PrivacyType::kBounded;
  double rho = 0;
  double epsilon = 0;
  double delta = 0;
  SensitivityModel sensitivity;
  std::optional<OrderKind> order;
  uint64_t seed = 0;
  int depth = 0;
  // Noise variance applied per child at every level.
  double sigma2 = 0;
  // Total zCDP cost actually booked, including the root under unbounded
  // privacy.
  double rho_consumed = 0;
  // Index d holds the released depth d.
  std::vector<LevelStats> per_level;
};

nlohmann::json MetadataToJson(const ReleaseMetadata& meta);

struct DPRelease {
  HierTree tree;
  ReleaseMetadata metadata;
};

// Maps a noisy child vector to a non-negative integer vector summing to c.
// `rng` is the parent's substream after the noise draws.
using ChildSolver = std::function<absl::StatusOr<std::vector<int64_t>>(
    absl::Span<const int64_t> noisy, int64_t c, RandomStream& rng)>;

// Chebyshev solver with the configured order. kRandom draws its permutation
// seed from the parent's substream.
ChildSolver ChebyshevSolver(OrderKind order);

enum class Execution { kParallel, kSerial };

// The shared descent. `mechanism` is recorded in the metadata.
absl::StatusOr<DPRelease> TopDownRelease(const HierTree& truth,
                                         const ReleaseConfig& config,
                                         const ChildSolver& solver,
                                         std::string mechanism,
                                         Execution execution);

// InfTDA with the OpenMP driver.
absl::StatusOr<DPRelease> Release(const HierTree& truth,
                                  const ReleaseConfig& config);

// Single-threaded reference driver; bit-identical output to Release().
absl::StatusOr<DPRelease> ReleaseSerial(const HierTree& truth,
                                        const ReleaseConfig& config);

struct ExportRow {
  std::string origin;
  std::string destination;
  int64_t flow = 0;
};

// Positive attributes at `depth` as (origin code, destination code, flow),
// sorted by key. Depth T gives the released tabular dataset.
absl::StatusOr<std::vector<ExportRow>> ExportTable(const HierTree& tree,
                                                   int depth);

// High-probability ceiling on the max absolute error at depth `level` of a
// bounded release on a tree with constant branching b per depth:
// 2 l sqrt(2 sigma2 ln(2 b l b^l / beta)).
absl::StatusOr<double> TheoreticalErrorEnvelope(int level, double sigma2,
                                                int branching, double beta);

// Branching factor of the O/D tree when both hierarchies split every area
// into the same number of children.
std::optional<int> RegularBranchingFactor(const HierTree& tree);

}  // namespace topdown

#endif  // TOPDOWN_INFTDA_H_
