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

#include "topdown/trips.h"

#include <algorithm>
#include <fstream>

#include "absl/strings/ascii.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "topdown/status_macros.h"

namespace topdown {

std::vector<std::pair<NodeKey, int64_t>> TripTable::SortedEntries() const {
  std::vector<std::pair<NodeKey, int64_t>> out;
  out.reserve(counts.size());
  for (const auto& [k, v] : counts) out.emplace_back(NodeKey::Unpack(k), v);
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

absl::Status TripTable::Add(NodeKey key, int64_t count) {
  if (count <= 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("trip count must be positive, got ", count));
  }
  int64_t& slot = counts[key.Pack()];
  if (__builtin_add_overflow(slot, count, &slot) ||
      __builtin_add_overflow(total, count, &total)) {
    return absl::OutOfRangeError("trip count overflows int64");
  }
  return absl::OkStatus();
}

absl::StatusOr<TripTable> IngestTrips(const std::vector<TripRow>& rows,
                                      const PartitionHierarchy& origins,
                                      const PartitionHierarchy& destinations) {
  TripTable table;
  const int g_o = origins.levels();
  const int g_d = destinations.levels();
  for (size_t r = 0; r < rows.size(); ++r) {
    const TripRow& row = rows[r];
    const auto o = origins.Find(g_o, row.origin);
    if (!o.has_value()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "trip row ", r + 1, ": unknown origin area '", row.origin, "'"));
    }
    const auto d = destinations.Find(g_d, row.destination);
    if (!d.has_value()) {
      return absl::InvalidArgumentError(
          absl::StrCat("trip row ", r + 1, ": unknown destination area '",
                       row.destination, "'"));
    }
    const int64_t count = row.count.value_or(1);
    if (count <= 0) {
      return absl::InvalidArgumentError(absl::StrCat(
          "trip row ", r + 1, ": count must be positive, got ", count));
    }
    RETURN_IF_ERROR(table.Add({*o, *d}, count));
  }
  return table;
}

absl::StatusOr<std::vector<TripRow>> ReadTripsCsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::vector<TripRow> rows;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (absl::StripAsciiWhitespace(line).empty()) continue;
    std::vector<std::string> fields = SplitCsvLine(line);
    if (fields.size() < 2 || fields.size() > 3) {
      return absl::InvalidArgumentError(absl::StrCat(
          path, ":", line_no, ": expected origin,destination[,count]"));
    }
    TripRow row{fields[0], fields[1], std::nullopt};
    if (fields.size() == 3) {
      int64_t count = 0;
      if (!absl::SimpleAtoi(fields[2], &count)) {
        if (rows.empty() && line_no == 1) continue;  // header
        return absl::InvalidArgumentError(absl::StrCat(
            path, ":", line_no, ": invalid count '", fields[2], "'"));
      }
      row.count = count;
    } else if (line_no == 1 && fields[0] == "origin" &&
               fields[1] == "destination") {
      continue;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace topdown
