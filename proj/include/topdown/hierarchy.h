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

#ifndef TOPDOWN_HIERARCHY_H_
#define TOPDOWN_HIERARCHY_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/container/flat_hash_map.h"
#include "absl/status/statusor.h"
#include "absl/types/span.h"

namespace topdown {

// Index of an area within one level of a partition hierarchy.
using AreaId = uint32_t;

// A geographic space partitioned into g nested levels P_1 ... P_g. Level 0
// holds the single root area covering the whole space. Every area at level
// l >= 1 has exactly one parent at level l - 1, so the children of each area
// partition it.
//
// Area codes are unique within a level; the same code may appear at different
// levels and denotes different areas there. Area ids are assigned in order of
// first appearance in the input rows, which makes ids reproducible from the
// leaf paths returned by LeafPaths().
class PartitionHierarchy {
 public:
  static constexpr AreaId kRoot = 0;
  static constexpr std::string_view kRootCode = "X";

  // Builds a hierarchy from full root-to-leaf paths, one leaf per row. Each
  // row lists the area code at levels 1..g. Rejects empty input, ragged rows,
  // empty codes, an area with two different parents and repeated leaves.
  static absl::StatusOr<PartitionHierarchy> FromPaths(
      const std::vector<std::vector<std::string>>& rows);

  // Number of partition levels g (the root level is not counted).
  int levels() const { return static_cast<int>(levels_.size()) - 1; }

  // Number of areas at `level` (1 at level 0).
  size_t size(int level) const { return levels_[level].codes.size(); }

  const std::string& code(int level, AreaId id) const {
    return levels_[level].codes[id];
  }

  std::optional<AreaId> Find(int level, std::string_view code) const;

  // Parent at level - 1 of an area at `level` >= 1.
  AreaId parent(int level, AreaId id) const {
    return levels_[level].parent[id];
  }

  // Areas at level + 1 contained in area `id` at `level` < g.
  absl::Span<const AreaId> children(int level, AreaId id) const;

  // The area at `to_level` <= `level` that contains area `id`.
  AreaId Ancestor(int level, AreaId id, int to_level) const;

  // Leaf paths in leaf-id order; FromPaths(LeafPaths()) reproduces every id.
  std::vector<std::vector<std::string>> LeafPaths() const;

  // Common child count b when every non-leaf area has exactly b children.
  std::optional<int> UniformBranching() const;

  bool SameShape(const PartitionHierarchy& other) const;

 private:
  struct Level {
    std::vector<std::string> codes;
    std::vector<AreaId> parent;
    // CSR layout of the children of each area (pointing to level + 1).
    std::vector<uint32_t> child_offsets;
    std::vector<AreaId> child_ids;
    absl::flat_hash_map<std::string, AreaId> index;
  };

  PartitionHierarchy() = default;

  std::vector<Level> levels_;
};

// Reads a header-less CSV where each row is a full path of area codes.
absl::StatusOr<std::vector<std::vector<std::string>>> ReadPathRows(
    const std::string& path);

absl::StatusOr<PartitionHierarchy> ReadHierarchyCsv(const std::string& path);

// Splits one CSV line on commas, trimming a trailing carriage return and the
// whitespace around each field. Quoting is not supported.
std::vector<std::string> SplitCsvLine(std::string_view line);

}  // namespace topdown

#endif  // TOPDOWN_HIERARCHY_H_
