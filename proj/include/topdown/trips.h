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

#ifndef TOPDOWN_TRIPS_H_
#define TOPDOWN_TRIPS_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "absl/container/flat_hash_map.h"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "topdown/hierarchy.h"

namespace topdown {

// An (origin, destination) pair of area ids packed into one integer.
struct NodeKey {
  AreaId origin = 0;
  AreaId destination = 0;

  uint64_t Pack() const {
    return (static_cast<uint64_t>(origin) << 32) | destination;
  }
  static NodeKey Unpack(uint64_t packed) {
    return {static_cast<AreaId>(packed >> 32),
            static_cast<AreaId>(packed & 0xffffffffu)};
  }
  friend bool operator==(const NodeKey&, const NodeKey&) = default;
  friend auto operator<=>(const NodeKey& a, const NodeKey& b) {
    return a.Pack() <=> b.Pack();
  }
};

// One raw CSV row: origin leaf code, destination leaf code, optional count.
struct TripRow {
  std::string origin;
  std::string destination;
  std::optional<int64_t> count;
};

// Aggregated trips between leaf areas. Keys are leaf-level NodeKeys packed
// with NodeKey::Pack(); all counts are positive.
struct TripTable {
  absl::flat_hash_map<uint64_t, int64_t> counts;
  int64_t total = 0;

  // (key, count) pairs sorted by key.
  std::vector<std::pair<NodeKey, int64_t>> SortedEntries() const;

  // Adds `count` > 0 trips for `key`, failing on int64 overflow.
  absl::Status Add(NodeKey key, int64_t count);
};

// Two hierarchies and the trips between their leaves.
struct Dataset {
  std::shared_ptr<const PartitionHierarchy> origins;
  std::shared_ptr<const PartitionHierarchy> destinations;
  TripTable trips;
};

// Aggregates raw rows against the leaf levels of the two hierarchies. Absent
// counts mean one trip. Rejects unknown leaf codes and non-positive counts.
absl::StatusOr<TripTable> IngestTrips(const std::vector<TripRow>& rows,
                                      const PartitionHierarchy& origins,
                                      const PartitionHierarchy& destinations);

// Reads `origin,destination[,count]` rows. Blank lines are skipped; a first
// line whose count field is not numeric is treated as a header.
absl::StatusOr<std::vector<TripRow>> ReadTripsCsv(const std::string& path);

}  // namespace topdown

#endif  // TOPDOWN_TRIPS_H_
