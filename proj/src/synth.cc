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

#include "topdown/synth.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <vector>

#include "absl/container/flat_hash_set.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "topdown/status_macros.h"

namespace topdown {
namespace {

constexpr size_t kMaxLeaves = size_t{1} << 24;

absl::Status WriteLines(const std::filesystem::path& path,
                        const std::vector<std::string>& lines) {
  std::ofstream out(path);
  if (!out) {
    return absl::PermissionDeniedError(
        absl::StrCat("cannot write ", path.string()));
  }
  for (const std::string& l : lines) out << l << '\n';
  out.close();
  if (!out) {
    return absl::DataLossError(absl::StrCat("write failed: ", path.string()));
  }
  return absl::OkStatus();
}

std::vector<std::string> PathLines(const PartitionHierarchy& h) {
  std::vector<std::string> lines;
  for (const auto& row : h.LeafPaths()) lines.push_back(absl::StrJoin(row, ","));
  return lines;
}

}  // namespace

std::string_view PartitionKindName(PartitionKind kind) {
  return kind == PartitionKind::kBinary ? "binary" : "random";
}

absl::StatusOr<PartitionKind> ParsePartitionKind(std::string_view name) {
  if (name == "binary") return PartitionKind::kBinary;
  if (name == "random") return PartitionKind::kRandom;
  return absl::InvalidArgumentError(
      absl::StrCat("unknown partition kind '", std::string(name), "'"));
}

absl::StatusOr<double> ParseSparsity(std::string_view name) {
  double s;
  if (name == "complete") {
    s = 1.0;
  } else if (name == "dense") {
    s = 0.5;
  } else if (name == "sparse") {
    s = 0.01;
  } else if (!absl::SimpleAtod(std::string(name), &s)) {
    return absl::InvalidArgumentError(
        absl::StrCat("unknown sparsity '", std::string(name), "'"));
  }
  if (!(s > 0 && s <= 1)) {
    return absl::InvalidArgumentError(
        absl::StrCat("sparsity must be in (0, 1], got ", std::string(name)));
  }
  return s;
}

int SynthSpec::EffectiveLevels() const {
  if (levels > 0) return levels;
  return kind == PartitionKind::kBinary ? 8 : 4;
}

absl::Status SynthSpec::Validate() const {
  if (levels < 0 || EffectiveLevels() > 24) {
    return absl::InvalidArgumentError(
        absl::StrCat("levels must be in [1, 24], got ", levels));
  }
  if (kind == PartitionKind::kRandom && (k_min < 1 || k_max < k_min)) {
    return absl::InvalidArgumentError(
        absl::StrCat("invalid branching range [", k_min, ", ", k_max, "]"));
  }
  if (!(sparsity > 0 && sparsity <= 1)) {
    return absl::InvalidArgumentError(
        absl::StrCat("sparsity must be in (0, 1], got ", sparsity));
  }
  if (!(exponent > 1)) {
    return absl::InvalidArgumentError(
        absl::StrCat("Pareto exponent must be > 1, got ", exponent));
  }
  return absl::OkStatus();
}

absl::StatusOr<PartitionHierarchy> GenPartition(const SynthSpec& spec,
                                                StreamTag stream) {
  RETURN_IF_ERROR(spec.Validate());
  const int g = spec.EffectiveLevels();
  RandomStream rng(spec.seed, {static_cast<uint64_t>(stream)});
  const char prefix = spec.kind == PartitionKind::kBinary ? 'b' : 'r';

  // paths[i] is the code path of area i at the current level.
  std::vector<std::vector<std::string>> paths(1);
  for (int l = 1; l <= g; ++l) {
    std::vector<std::vector<std::string>> next;
    for (const auto& p : paths) {
      int k = 2;
      if (spec.kind == PartitionKind::kRandom) {
        const auto span = static_cast<uint64_t>(spec.k_max - spec.k_min + 1);
        k = spec.k_min + static_cast<int>(rng.UniformBelow(span));
      }
      for (int c = 0; c < k; ++c) {
        auto child = p;
        child.push_back(absl::StrCat(std::string(1, prefix), l, "_", next.size()));
        next.push_back(std::move(child));
      }
      if (next.size() > kMaxLeaves) {
        return absl::ResourceExhaustedError(
            absl::StrCat("partition exceeds ", kMaxLeaves, " areas"));
      }
    }
    paths = std::move(next);
  }
  return PartitionHierarchy::FromPaths(paths);
}

uint64_t SupportSize(double sparsity, uint64_t universe) {
  if (sparsity >= 1) return universe;
  const auto m = static_cast<uint64_t>(
      std::floor(sparsity * static_cast<double>(universe)));
  return std::clamp<uint64_t>(m, 1, universe);
}

absl::StatusOr<int64_t> ParetoFlow(double u, double exponent) {
  const double x = std::pow(u, -1.0 / (exponent - 1.0));
  if (!(x <= 0x1.0p53)) {
    return absl::OutOfRangeError(
        absl::StrCat("Pareto draw ", x, " exceeds 2^53"));
  }
  return std::max<int64_t>(1, static_cast<int64_t>(std::floor(x + 0.5)));
}

absl::StatusOr<TripTable> GenFlows(const PartitionHierarchy& origins,
                                   const PartitionHierarchy& destinations,
                                   const SynthSpec& spec) {
  RETURN_IF_ERROR(spec.Validate());
  const uint64_t n_o = origins.size(origins.levels());
  const uint64_t n_d = destinations.size(destinations.levels());
  const uint64_t universe = n_o * n_d;
  const uint64_t m = SupportSize(spec.sparsity, universe);

  RandomStream rng(spec.seed,
                   {static_cast<uint64_t>(StreamTag::kSynthFlows)});
  std::vector<uint64_t> support;
  if (m == universe) {
    support.resize(universe);
    for (uint64_t i = 0; i < universe; ++i) support[i] = i;
  } else {
    // Floyd's sampling without replacement.
    absl::flat_hash_set<uint64_t> chosen;
    chosen.reserve(m);
    for (uint64_t j = universe - m; j < universe; ++j) {
      const uint64_t t = rng.UniformBelow(j + 1);
      chosen.insert(chosen.contains(t) ? j : t);
    }
    support.assign(chosen.begin(), chosen.end());
    std::sort(support.begin(), support.end());
  }

  TripTable table;
  table.counts.reserve(support.size());
  for (uint64_t p : support) {
    ASSIGN_OR_RETURN(const int64_t flow,
                     ParetoFlow(rng.UniformOpenClosed(), spec.exponent));
    const NodeKey key{static_cast<AreaId>(p / n_d),
                      static_cast<AreaId>(p % n_d)};
    RETURN_IF_ERROR(table.Add(key, flow));
  }
  return table;
}

absl::StatusOr<Dataset> Generate(const SynthSpec& spec) {
  ASSIGN_OR_RETURN(PartitionHierarchy o,
                   GenPartition(spec, StreamTag::kSynthOrigin));
  ASSIGN_OR_RETURN(PartitionHierarchy d,
                   GenPartition(spec, StreamTag::kSynthDestination));
  Dataset out;
  out.origins = std::make_shared<const PartitionHierarchy>(std::move(o));
  out.destinations = std::make_shared<const PartitionHierarchy>(std::move(d));
  ASSIGN_OR_RETURN(out.trips, GenFlows(*out.origins, *out.destinations, spec));
  return out;
}

absl::Status WriteSynthCsv(const Dataset& data, const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    return absl::PermissionDeniedError(
        absl::StrCat("cannot create ", dir, ": ", ec.message()));
  }
  const std::filesystem::path root(dir);
  RETURN_IF_ERROR(
      WriteLines(root / "origin_hierarchy.csv", PathLines(*data.origins)));
  RETURN_IF_ERROR(WriteLines(root / "destination_hierarchy.csv",
                             PathLines(*data.destinations)));
  const int go = data.origins->levels();
  const int gd = data.destinations->levels();
  std::vector<std::string> trips = {"origin,destination,count"};
  for (const auto& [key, count] : data.trips.SortedEntries()) {
    trips.push_back(absl::StrCat(data.origins->code(go, key.origin), ",",
                                 data.destinations->code(gd, key.destination),
                                 ",", count));
  }
  return WriteLines(root / "trips.csv", trips);
}

}  // namespace topdown
