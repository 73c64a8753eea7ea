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

#include "topdown/dataset_io.h"

#include <fstream>
#include <tuple>
#include <vector>

#include "absl/container/flat_hash_map.h"
#include "absl/strings/ascii.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "cereal/archives/binary.hpp"
#include "cereal/types/string.hpp"
#include "cereal/types/tuple.hpp"
#include "cereal/types/vector.hpp"
#include "topdown/inftda.h"
#include "topdown/status_macros.h"

namespace topdown {
namespace {

constexpr char kMagic[] = "topdown-od-dataset";
constexpr uint32_t kVersion = 1;

struct DatasetArchive {
  std::string magic;
  uint32_t version = 0;
  std::vector<std::vector<std::string>> origin_paths;
  std::vector<std::vector<std::string>> destination_paths;
  std::vector<std::tuple<uint32_t, uint32_t, int64_t>> trips;

  template <class Archive>
  void serialize(Archive& ar) {
    ar(magic, version, origin_paths, destination_paths, trips);
  }
};

absl::StatusOr<std::shared_ptr<const PartitionHierarchy>> Shared(
    const std::vector<std::vector<std::string>>& paths) {
  ASSIGN_OR_RETURN(PartitionHierarchy h, PartitionHierarchy::FromPaths(paths));
  return std::make_shared<const PartitionHierarchy>(std::move(h));
}

}  // namespace

absl::StatusOr<Dataset> IngestCsv(const std::string& origin_hierarchy,
                                  const std::string& destination_hierarchy,
                                  const std::string& trips) {
  ASSIGN_OR_RETURN(PartitionHierarchy o, ReadHierarchyCsv(origin_hierarchy));
  ASSIGN_OR_RETURN(PartitionHierarchy d,
                   ReadHierarchyCsv(destination_hierarchy));
  ASSIGN_OR_RETURN(const std::vector<TripRow> rows, ReadTripsCsv(trips));
  Dataset out;
  out.origins = std::make_shared<const PartitionHierarchy>(std::move(o));
  out.destinations = std::make_shared<const PartitionHierarchy>(std::move(d));
  auto table = IngestTrips(rows, *out.origins, *out.destinations);
  if (!table.ok()) {
    return absl::Status(table.status().code(),
                        absl::StrCat(trips, ": ", table.status().message()));
  }
  out.trips = *std::move(table);
  return out;
}

absl::Status SaveDataset(const Dataset& data, const std::string& path) {
  DatasetArchive a;
  a.magic = kMagic;
  a.version = kVersion;
  a.origin_paths = data.origins->LeafPaths();
  a.destination_paths = data.destinations->LeafPaths();
  for (const auto& [key, count] : data.trips.SortedEntries()) {
    a.trips.emplace_back(key.origin, key.destination, count);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) return absl::PermissionDeniedError(absl::StrCat("cannot write ", path));
  {
    cereal::BinaryOutputArchive ar(out);
    ar(a);
  }
  out.close();
  if (!out) return absl::DataLossError(absl::StrCat("write failed: ", path));
  return absl::OkStatus();
}

absl::StatusOr<Dataset> LoadDataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  DatasetArchive a;
  try {
    cereal::BinaryInputArchive ar(in);
    ar(a);
  } catch (const std::exception& e) {
    return absl::DataLossError(
        absl::StrCat(path, ": not a dataset archive (", e.what(), ")"));
  }
  if (a.magic != kMagic || a.version != kVersion) {
    return absl::DataLossError(
        absl::StrCat(path, ": unrecognized dataset archive"));
  }
  Dataset out;
  ASSIGN_OR_RETURN(out.origins, Shared(a.origin_paths));
  ASSIGN_OR_RETURN(out.destinations, Shared(a.destination_paths));
  const size_t n_o = out.origins->size(out.origins->levels());
  const size_t n_d = out.destinations->size(out.destinations->levels());
  for (const auto& [o, d, count] : a.trips) {
    if (o >= n_o || d >= n_d || count <= 0) {
      return absl::DataLossError(absl::StrCat(path, ": corrupt trip entry"));
    }
    RETURN_IF_ERROR(out.trips.Add({o, d}, count));
  }
  return out;
}

absl::StatusOr<HierTree> BuildTree(const Dataset& data, TreeMode mode) {
  return HierTree::Build(data.trips, data.origins, data.destinations, mode);
}

absl::Status WriteReleaseCsv(const HierTree& tree, const std::string& path,
                             std::optional<int> depth) {
  std::ofstream out(path);
  if (!out) return absl::PermissionDeniedError(absl::StrCat("cannot write ", path));
  out << "depth,origin,destination,flow\n";
  const int first = depth.value_or(0);
  const int last = depth.value_or(tree.depth());
  for (int d = first; d <= last; ++d) {
    ASSIGN_OR_RETURN(const std::vector<ExportRow> rows, ExportTable(tree, d));
    for (const ExportRow& r : rows) {
      out << d << ',' << r.origin << ',' << r.destination << ',' << r.flow
          << '\n';
    }
  }
  out.close();
  if (!out) return absl::DataLossError(absl::StrCat("write failed: ", path));
  return absl::OkStatus();
}

absl::StatusOr<HierTree> ReadReleaseCsv(const std::string& path,
                                        const Dataset& data, TreeMode mode) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  ASSIGN_OR_RETURN(HierTree tree,
                   HierTree::Create(data.origins, data.destinations, mode));
  const int depth = tree.depth();
  std::vector<bool> present(depth + 1, false);
  std::string line;
  size_t line_no = 0;
  auto fail = [&](std::string_view what) {
    return absl::InvalidArgumentError(
        absl::StrCat(path, ":", line_no, ": ", std::string(what)));
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (absl::StripAsciiWhitespace(line).empty()) continue;
    const std::vector<std::string> f = SplitCsvLine(line);
    if (line_no == 1 && !f.empty() && f[0] == "depth") continue;
    if (f.size() != 4) return fail("expected depth,origin,destination,flow");
    int d;
    int64_t flow;
    if (!absl::SimpleAtoi(f[0], &d) || d < 0 || d > depth) {
      return fail(absl::StrCat("invalid depth '", f[0], "'"));
    }
    if (!absl::SimpleAtoi(f[3], &flow)) {
      return fail(absl::StrCat("invalid flow '", f[3], "'"));
    }
    const auto o = tree.origins().Find(tree.OriginLevel(d), f[1]);
    const auto t = tree.destinations().Find(tree.DestinationLevel(d), f[2]);
    if (!o || !t) {
      return fail(absl::StrCat("unknown area pair (", f[1], ", ", f[2],
                               ") at depth ", d));
    }
    const NodeKey key{*o, *t};
    if (tree.level(d).contains(key.Pack()) && !(d == 0 && !present[0])) {
      return fail("duplicate row");
    }
    tree.SetAttribute(d, key, flow);
    present[d] = true;
  }
  for (int d = depth - 1; d >= 0; --d) {
    if (present[d]) continue;
    absl::flat_hash_map<uint64_t, int64_t> sums;
    for (const auto& [k, v] : tree.level(d + 1)) {
      int64_t& acc = sums[tree.Parent(d + 1, NodeKey::Unpack(k)).Pack()];
      if (__builtin_add_overflow(acc, v, &acc)) {
        return absl::OutOfRangeError("aggregated release overflows int64");
      }
    }
    for (const auto& [k, v] : sums) tree.SetAttribute(d, NodeKey::Unpack(k), v);
    present[d] = true;
  }
  return tree;
}

}  // namespace topdown
