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

// Synthetic partitions and Pareto-distributed O/D flows.
//
// A binary partition halves every area for `levels` levels (8 by default,
// 256 leaves). A random partition splits every area into k children with k
// uniform on {k_min, ..., k_max} (4 levels, k in 2..10 by default). Origins
// and destinations are independent draws of the same kind.
//
// The flow support is a uniform sample of max(1, floor(sparsity * U)) leaf
// pairs out of the U possible; each selected flow is a continuous Pareto
// draw with x_min = 1 and density exponent `exponent`, rounded half up and
// clamped to at least 1.

#ifndef TOPDOWN_SYNTH_H_
#define TOPDOWN_SYNTH_H_

#include <cstdint>
#include <string>
#include <string_view>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "topdown/hierarchy.h"
#include "topdown/random.h"
#include "topdown/trips.h"

namespace topdown {

enum class PartitionKind { kBinary, kRandom };

std::string_view PartitionKindName(PartitionKind kind);
absl::StatusOr<PartitionKind> ParsePartitionKind(std::string_view name);

// "complete" = 1, "dense" = 0.5, "sparse" = 0.01, or a number in (0, 1].
absl::StatusOr<double> ParseSparsity(std::string_view name);

struct SynthSpec {
  PartitionKind kind = PartitionKind::kBinary;
  // 0 picks the default for the kind (8 binary, 4 random).
  int levels = 0;
  int k_min = 2;
  int k_max = 10;
  double sparsity = 1.0;
  double exponent = 2.0;
  uint64_t seed = 0;

  int EffectiveLevels() const;
  absl::Status Validate() const;
};

// `stream` separates the origin and destination draws.
absl::StatusOr<PartitionHierarchy> GenPartition(const SynthSpec& spec,
                                                StreamTag stream);

// Number of leaf pairs a spec selects out of `universe`.
uint64_t SupportSize(double sparsity, uint64_t universe);

// One Pareto flow from a uniform u in (0, 1].
absl::StatusOr<int64_t> ParetoFlow(double u, double exponent);

absl::StatusOr<TripTable> GenFlows(const PartitionHierarchy& origins,
                                   const PartitionHierarchy& destinations,
                                   const SynthSpec& spec);

absl::StatusOr<Dataset> Generate(const SynthSpec& spec);

// Writes origin_hierarchy.csv, destination_hierarchy.csv and trips.csv
// into `dir`, creating it if needed.
absl::Status WriteSynthCsv(const Dataset& data, const std::string& dir);

}  // namespace topdown

#endif  // TOPDOWN_SYNTH_H_
