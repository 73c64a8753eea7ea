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

#ifndef TOPDOWN_HIER_TREE_H_
#define TOPDOWN_HIER_TREE_H_

#include <cstdint>
#include <memory>
#include <string_view>
#include <vector>

#include "absl/container/flat_hash_map.h"
#include "absl/status/statusor.h"
#include "topdown/hierarchy.h"
#include "topdown/trips.h"

namespace topdown {

// Which coordinate is refined first when descending one hierarchy level.
enum class TreeMode { kDestination, kOrigin };

std::string_view TreeModeName(TreeMode mode);
absl::StatusOr<TreeMode> ParseTreeMode(std::string_view name);

// A node of a HierTree: a key at a given depth.
struct TreeNode {
  int depth = 0;
  NodeKey key;
  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

// Non-negative hierarchical tree over origin/destination pairs.
//
// For g-level hierarchies the tree has depth T = 2g with the root at depth 0.
// In destination mode the step from an even depth splits the destination area
// and the step from an odd depth splits the origin area; origin mode swaps
// the two. A node at depth k therefore pairs an origin area at level
// OriginLevel(k) with a destination area at level DestinationLevel(k).
//
// Attributes are stored sparsely, one map per depth holding nonzero values
// only; absent keys read as 0. The root entry is always present. Child
// universes come from the hierarchies, never from the stored data.
//
// The same type holds true data (built from trips) and released data, where
// attributes may be arbitrary integers until validated.
class HierTree {
 public:
  // All-zero tree (root attribute 0). Fails if the hierarchies differ in g.
  static absl::StatusOr<HierTree> Create(
      std::shared_ptr<const PartitionHierarchy> origins,
      std::shared_ptr<const PartitionHierarchy> destinations, TreeMode mode);

  // Aggregates a trip table into every depth in O(|support| * T).
  static absl::StatusOr<HierTree> Build(
      const TripTable& table,
      std::shared_ptr<const PartitionHierarchy> origins,
      std::shared_ptr<const PartitionHierarchy> destinations, TreeMode mode);

  int depth() const { return 2 * origins_->levels(); }
  TreeMode mode() const { return mode_; }
  const PartitionHierarchy& origins() const { return *origins_; }
  const PartitionHierarchy& destinations() const { return *destinations_; }
  const std::shared_ptr<const PartitionHierarchy>& origins_ptr() const {
    return origins_;
  }
  const std::shared_ptr<const PartitionHierarchy>& destinations_ptr() const {
    return destinations_;
  }

  int OriginLevel(int depth) const;
  int DestinationLevel(int depth) const;
  // True when going from `depth` to depth + 1 refines the destination.
  bool SplitsDestination(int depth) const;

  int64_t root() const { return Attribute(0, NodeKey{}); }
  int64_t Attribute(int depth, NodeKey key) const;
  // Stores `value`; zero erases the entry except at the root.
  void SetAttribute(int depth, NodeKey key, int64_t value);

  // Nonzero entries at `depth` (unordered).
  const absl::flat_hash_map<uint64_t, int64_t>& level(int depth) const {
    return levels_[depth];
  }
  // Nonzero entries at `depth` sorted by key.
  std::vector<std::pair<NodeKey, int64_t>> SortedLevel(int depth) const;
  size_t NodeCount(int depth) const { return levels_[depth].size(); }

  // Full child universe of a node at depth < T, in hierarchy id order.
  std::vector<NodeKey> Children(int depth, NodeKey key) const;
  // Parent of a node at depth >= 1.
  NodeKey Parent(int depth, NodeKey key) const;

  // Number of nodes at `depth` in the full universe.
  double UniverseSize(int depth) const;

  // Both trees are bound to hierarchies of identical shape and the same mode.
  bool Compatible(const HierTree& other) const;

 private:
  HierTree() = default;

  std::shared_ptr<const PartitionHierarchy> origins_;
  std::shared_ptr<const PartitionHierarchy> destinations_;
  TreeMode mode_ = TreeMode::kDestination;
  std::vector<absl::flat_hash_map<uint64_t, int64_t>> levels_;
};

// Hierarchical range query q(origin area at origin_level, destination area at
// destination_level). Levels may differ by at most one. Queries that are not
// nodes of the tree's mode (e.g. a finer origin in a destination tree) are
// answered by summing the matching nodes one depth below.
absl::StatusOr<int64_t> RangeQuery(const HierTree& tree, int origin_level,
                                   AreaId origin, int destination_level,
                                   AreaId destination);

// Nodes violating non-negativity or q(u) = sum of q over children. For a
// sum violation the parent is reported, including parents that are absent
// while some child is materialized. Empty iff the tree is consistent.
std::vector<TreeNode> ValidateConsistency(const HierTree& tree);

}  // namespace topdown

#endif  // TOPDOWN_HIER_TREE_H_
