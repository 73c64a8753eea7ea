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

#include "topdown/hier_tree.h"

#include <algorithm>
#include <cstdlib>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace topdown {

std::string_view TreeModeName(TreeMode mode) {
  return mode == TreeMode::kDestination ? "destination" : "origin";
}

absl::StatusOr<TreeMode> ParseTreeMode(std::string_view name) {
  if (name == "destination") return TreeMode::kDestination;
  if (name == "origin") return TreeMode::kOrigin;
  return absl::InvalidArgumentError(
      absl::StrCat("unknown tree mode '", std::string(name), "'"));
}

absl::StatusOr<HierTree> HierTree::Create(
    std::shared_ptr<const PartitionHierarchy> origins,
    std::shared_ptr<const PartitionHierarchy> destinations, TreeMode mode) {
  if (origins == nullptr || destinations == nullptr) {
    return absl::InvalidArgumentError("missing hierarchy");
  }
  if (origins->levels() != destinations->levels()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "origin and destination hierarchies must have the same number of "
        "levels (",
        origins->levels(), " vs ", destinations->levels(), ")"));
  }
  HierTree tree;
  tree.origins_ = std::move(origins);
  tree.destinations_ = std::move(destinations);
  tree.mode_ = mode;
  tree.levels_.resize(tree.depth() + 1);
  tree.levels_[0][NodeKey{}.Pack()] = 0;
  return tree;
}

absl::StatusOr<HierTree> HierTree::Build(
    const TripTable& table, std::shared_ptr<const PartitionHierarchy> origins,
    std::shared_ptr<const PartitionHierarchy> destinations, TreeMode mode) {
  auto created = Create(std::move(origins), std::move(destinations), mode);
  if (!created.ok()) return created.status();
  HierTree tree = std::move(created).value();
  const int g = tree.origins_->levels();
  const int T = tree.depth();

  // ancestors[l][leaf]: the level-l area containing each leaf.
  auto ancestors = [g](const PartitionHierarchy& h) {
    std::vector<std::vector<AreaId>> out(g + 1);
    out[g].resize(h.size(g));
    for (AreaId leaf = 0; leaf < h.size(g); ++leaf) out[g][leaf] = leaf;
    for (int l = g - 1; l >= 0; --l) {
      out[l].resize(h.size(g));
      for (AreaId leaf = 0; leaf < h.size(g); ++leaf) {
        out[l][leaf] = h.parent(l + 1, out[l + 1][leaf]);
      }
    }
    return out;
  };
  const auto origin_anc = ancestors(*tree.origins_);
  const auto dest_anc = ancestors(*tree.destinations_);

  for (int k = 0; k <= T; ++k) tree.levels_[k].reserve(table.counts.size());
  for (const auto& [packed, count] : table.counts) {
    const NodeKey leaf = NodeKey::Unpack(packed);
    if (leaf.origin >= tree.origins_->size(g) ||
        leaf.destination >= tree.destinations_->size(g)) {
      return absl::InvalidArgumentError("trip table refers to unknown leaf");
    }
    for (int k = 0; k <= T; ++k) {
      const NodeKey key{origin_anc[tree.OriginLevel(k)][leaf.origin],
                        dest_anc[tree.DestinationLevel(k)][leaf.destination]};
      tree.levels_[k][key.Pack()] += count;
    }
  }
  return tree;
}

int HierTree::OriginLevel(int depth) const {
  return mode_ == TreeMode::kDestination ? depth / 2 : (depth + 1) / 2;
}

int HierTree::DestinationLevel(int depth) const {
  return mode_ == TreeMode::kDestination ? (depth + 1) / 2 : depth / 2;
}

bool HierTree::SplitsDestination(int depth) const {
  return (mode_ == TreeMode::kDestination) == (depth % 2 == 0);
}

int64_t HierTree::Attribute(int depth, NodeKey key) const {
  const auto& m = levels_[depth];
  auto it = m.find(key.Pack());
  return it == m.end() ? 0 : it->second;
}

void HierTree::SetAttribute(int depth, NodeKey key, int64_t value) {
  if (value == 0 && depth > 0) {
    levels_[depth].erase(key.Pack());
  } else {
    levels_[depth][key.Pack()] = value;
  }
}

std::vector<std::pair<NodeKey, int64_t>> HierTree::SortedLevel(
    int depth) const {
  std::vector<std::pair<NodeKey, int64_t>> out;
  out.reserve(levels_[depth].size());
  for (const auto& [k, v] : levels_[depth]) {
    out.emplace_back(NodeKey::Unpack(k), v);
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

std::vector<NodeKey> HierTree::Children(int depth, NodeKey key) const {
  std::vector<NodeKey> out;
  if (SplitsDestination(depth)) {
    for (AreaId c :
         destinations_->children(DestinationLevel(depth), key.destination)) {
      out.push_back({key.origin, c});
    }
  } else {
    for (AreaId c : origins_->children(OriginLevel(depth), key.origin)) {
      out.push_back({c, key.destination});
    }
  }
  return out;
}

NodeKey HierTree::Parent(int depth, NodeKey key) const {
  if (SplitsDestination(depth - 1)) {
    return {key.origin,
            destinations_->parent(DestinationLevel(depth), key.destination)};
  }
  return {origins_->parent(OriginLevel(depth), key.origin), key.destination};
}

double HierTree::UniverseSize(int depth) const {
  return static_cast<double>(origins_->size(OriginLevel(depth))) *
         static_cast<double>(destinations_->size(DestinationLevel(depth)));
}

bool HierTree::Compatible(const HierTree& other) const {
  if (mode_ != other.mode_) return false;
  const bool same_o = origins_ == other.origins_ ||
                      origins_->SameShape(*other.origins_);
  const bool same_d = destinations_ == other.destinations_ ||
                      destinations_->SameShape(*other.destinations_);
  return same_o && same_d;
}

absl::StatusOr<int64_t> RangeQuery(const HierTree& tree, int origin_level,
                                   AreaId origin, int destination_level,
                                   AreaId destination) {
  const int g = tree.origins().levels();
  if (origin_level < 0 || origin_level > g || destination_level < 0 ||
      destination_level > g) {
    return absl::InvalidArgumentError("query level out of range");
  }
  if (std::abs(origin_level - destination_level) > 1) {
    return absl::InvalidArgumentError(absl::StrCat(
        "range queries with level gap > 1 are not stored (levels ",
        origin_level, " and ", destination_level, ")"));
  }
  if (origin >= tree.origins().size(origin_level) ||
      destination >= tree.destinations().size(destination_level)) {
    return absl::InvalidArgumentError("query area id out of range");
  }
  const NodeKey key{origin, destination};
  if (origin_level == destination_level) {
    return tree.Attribute(2 * origin_level, key);
  }
  const bool finer_destination = destination_level > origin_level;
  const int coarse = std::min(origin_level, destination_level);
  if (finer_destination == (tree.mode() == TreeMode::kDestination)) {
    return tree.Attribute(2 * coarse + 1, key);
  }
  // Not a node of this tree: sum the intra-level nodes one depth below.
  const int fine = coarse + 1;
  int64_t sum = 0;
  if (finer_destination) {
    for (AreaId o : tree.origins().children(coarse, origin)) {
      sum += tree.Attribute(2 * fine, {o, destination});
    }
  } else {
    for (AreaId d : tree.destinations().children(coarse, destination)) {
      sum += tree.Attribute(2 * fine, {origin, d});
    }
  }
  return sum;
}

std::vector<TreeNode> ValidateConsistency(const HierTree& tree) {
  std::vector<TreeNode> bad;
  const int T = tree.depth();
  for (int k = 0; k <= T; ++k) {
    for (const auto& [packed, v] : tree.level(k)) {
      if (v < 0) bad.push_back({k, NodeKey::Unpack(packed)});
    }
  }
  for (int k = 0; k < T; ++k) {
    absl::flat_hash_map<uint64_t, int64_t> sums;
    for (const auto& [packed, v] : tree.level(k + 1)) {
      sums[tree.Parent(k + 1, NodeKey::Unpack(packed)).Pack()] += v;
    }
    for (const auto& [packed, s] : sums) {
      const NodeKey key = NodeKey::Unpack(packed);
      if (tree.Attribute(k, key) != s) bad.push_back({k, key});
    }
    for (const auto& [packed, v] : tree.level(k)) {
      if (v != 0 && !sums.contains(packed)) {
        bad.push_back({k, NodeKey::Unpack(packed)});
      }
    }
  }
  std::sort(bad.begin(), bad.end(), [](const TreeNode& a, const TreeNode& b) {
    return a.depth != b.depth ? a.depth < b.depth : a.key < b.key;
  });
  bad.erase(std::unique(bad.begin(), bad.end()), bad.end());
  return bad;
}

}  // namespace topdown
