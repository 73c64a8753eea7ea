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

// On-disk formats.
//
// An ingested dataset is a cereal binary archive holding both hierarchies as
// leaf paths and the trip table as (origin leaf, destination leaf, count).
// A release is a CSV with header depth,origin,destination,flow listing the
// nonzero attributes of one or more depths; area codes are resolved at the
// levels implied by the depth and the tree mode.

#ifndef TOPDOWN_DATASET_IO_H_
#define TOPDOWN_DATASET_IO_H_

#include <optional>
#include <string>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "topdown/hier_tree.h"
#include "topdown/trips.h"

namespace topdown {

// Reads the two hierarchy CSVs and the trips CSV.
absl::StatusOr<Dataset> IngestCsv(const std::string& origin_hierarchy,
                                  const std::string& destination_hierarchy,
                                  const std::string& trips);

absl::Status SaveDataset(const Dataset& data, const std::string& path);
absl::StatusOr<Dataset> LoadDataset(const std::string& path);

absl::StatusOr<HierTree> BuildTree(const Dataset& data, TreeMode mode);

// All depths when `depth` is empty.
absl::Status WriteReleaseCsv(const HierTree& tree, const std::string& path,
                             std::optional<int> depth = std::nullopt);

// Parses a release CSV against the dataset's hierarchies. Depths with no
// rows are filled by summing the deepest depth present, so a leaf-only
// file yields a full tree.
absl::StatusOr<HierTree> ReadReleaseCsv(const std::string& path,
                                        const Dataset& data, TreeMode mode);

}  // namespace topdown

#endif  // TOPDOWN_DATASET_IO_H_
