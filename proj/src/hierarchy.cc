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

#include "topdown/hierarchy.h"

#include <fstream>
#include <limits>

#include "absl/status/status.h"
#include "absl/strings/ascii.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"

namespace topdown {

absl::StatusOr<PartitionHierarchy> PartitionHierarchy::FromPaths(
    const std::vector<std::vector<std::string>>& rows) {
  if (rows.empty()) {
    return absl::InvalidArgumentError("hierarchy has no rows");
  }
  const size_t g = rows.front().size();
  if (g == 0) {
    return absl::InvalidArgumentError("hierarchy rows must have >= 1 level");
  }

  PartitionHierarchy h;
  h.levels_.resize(g + 1);
  Level& root = h.levels_[0];
  root.codes.emplace_back(kRootCode);
  root.index.emplace(std::string(kRootCode), kRoot);

  for (size_t r = 0; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != g) {
      return absl::InvalidArgumentError(
          absl::StrCat("ragged hierarchy row ", r + 1, ": expected ", g,
                       " levels, got ", row.size()));
    }
    AreaId parent_id = kRoot;
    for (size_t l = 1; l <= g; ++l) {
      const std::string& code = row[l - 1];
      if (code.empty()) {
        return absl::InvalidArgumentError(
            absl::StrCat("empty area code in hierarchy row ", r + 1));
      }
      Level& level = h.levels_[l];
      auto it = level.index.find(code);
      if (it != level.index.end()) {
        const AreaId existing = level.parent[it->second];
        if (existing != parent_id) {
          return absl::InvalidArgumentError(absl::StrCat(
              "inconsistent parentage: area '", code, "' at level ", l,
              " has parents '", h.levels_[l - 1].codes[existing], "' and '",
              h.levels_[l - 1].codes[parent_id], "'"));
        }
        if (l == g) {
          return absl::InvalidArgumentError(absl::StrCat(
              "duplicate leaf '", code, "' in hierarchy row ", r + 1));
        }
        parent_id = it->second;
        continue;
      }
      if (level.codes.size() >= std::numeric_limits<AreaId>::max()) {
        return absl::OutOfRangeError("too many areas in one level");
      }
      const AreaId id = static_cast<AreaId>(level.codes.size());
      level.codes.push_back(code);
      level.parent.push_back(parent_id);
      level.index.emplace(code, id);
      parent_id = id;
    }
  }

  // Children in id order, CSR style.
  for (size_t l = 0; l < g; ++l) {
    Level& level = h.levels_[l];
    const Level& below = h.levels_[l + 1];
    level.child_offsets.assign(level.codes.size() + 1, 0);
    for (AreaId p : below.parent) ++level.child_offsets[p + 1];
    for (size_t i = 1; i < level.child_offsets.size(); ++i) {
      level.child_offsets[i] += level.child_offsets[i - 1];
    }
    level.child_ids.resize(below.codes.size());
    std::vector<uint32_t> cursor(level.child_offsets.begin(),
                                 level.child_offsets.end() - 1);
    for (AreaId c = 0; c < below.parent.size(); ++c) {
      level.child_ids[cursor[below.parent[c]]++] = c;
    }
  }
  return h;
}

std::optional<AreaId> PartitionHierarchy::Find(int level,
                                               std::string_view code) const {
  if (level < 0 || level > levels()) return std::nullopt;
  const auto& index = levels_[level].index;
  auto it = index.find(absl::string_view(code.data(), code.size()));
  if (it == index.end()) return std::nullopt;
  return it->second;
}

absl::Span<const AreaId> PartitionHierarchy::children(int level,
                                                      AreaId id) const {
  const Level& l = levels_[level];
  const uint32_t begin = l.child_offsets[id];
  const uint32_t end = l.child_offsets[id + 1];
  return absl::MakeConstSpan(l.child_ids.data() + begin, end - begin);
}

AreaId PartitionHierarchy::Ancestor(int level, AreaId id, int to_level) const {
  while (level > to_level) {
    id = levels_[level].parent[id];
    --level;
  }
  return id;
}

std::vector<std::vector<std::string>> PartitionHierarchy::LeafPaths() const {
  const int g = levels();
  std::vector<std::vector<std::string>> rows;
  rows.reserve(size(g));
  for (AreaId leaf = 0; leaf < size(g); ++leaf) {
    std::vector<std::string> row(g);
    AreaId id = leaf;
    for (int l = g; l >= 1; --l) {
      row[l - 1] = levels_[l].codes[id];
      id = levels_[l].parent[id];
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::optional<int> PartitionHierarchy::UniformBranching() const {
  std::optional<int> b;
  for (int l = 0; l < levels(); ++l) {
    const auto& offsets = levels_[l].child_offsets;
    for (size_t i = 0; i + 1 < offsets.size(); ++i) {
      const int count = static_cast<int>(offsets[i + 1] - offsets[i]);
      if (!b.has_value()) b = count;
      if (*b != count) return std::nullopt;
    }
  }
  return b;
}

bool PartitionHierarchy::SameShape(const PartitionHierarchy& other) const {
  if (levels() != other.levels()) return false;
  for (int l = 1; l <= levels(); ++l) {
    if (levels_[l].codes != other.levels_[l].codes ||
        levels_[l].parent != other.levels_[l].parent) {
      return false;
    }
  }
  return true;
}

std::vector<std::string> SplitCsvLine(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  std::vector<std::string> fields =
      absl::StrSplit(absl::string_view(line.data(), line.size()), ',');
  for (auto& f : fields) absl::StripAsciiWhitespace(&f);
  return fields;
}

absl::StatusOr<std::vector<std::vector<std::string>>> ReadPathRows(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (absl::StripAsciiWhitespace(line).empty()) continue;
    rows.push_back(SplitCsvLine(line));
  }
  return rows;
}

absl::StatusOr<PartitionHierarchy> ReadHierarchyCsv(const std::string& path) {
  auto rows = ReadPathRows(path);
  if (!rows.ok()) return rows.status();
  auto h = PartitionHierarchy::FromPaths(*rows);
  if (!h.ok()) {
    return absl::Status(h.status().code(),
                        absl::StrCat(path, ": ", h.status().message()));
  }
  return h;
}

}  // namespace topdown
