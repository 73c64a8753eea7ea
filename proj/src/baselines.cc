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

#include "topdown/baselines.h"

#include <algorithm>
#include <functional>
#include <numeric>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "topdown/samplers.h"
#include "topdown/status_macros.h"

namespace topdown {
namespace {

using int128 = __int128;
using Cells = std::vector<std::pair<NodeKey, int64_t>>;

RandomStream LeafStream(uint64_t seed, NodeKey key) {
  return RandomStream(seed, {static_cast<uint64_t>(StreamTag::kLeafNoise),
                             key.Pack()});
}

// Runs `fill(i, out)` for i in [0, n) and concatenates the outputs in index
// order. The parallel path only changes who computes each block.
Cells ForEachBlock(int64_t n, Execution execution,
                   const std::function<void(int64_t, Cells&)>& fill) {
  std::vector<Cells> blocks(n);
  if (execution == Execution::kParallel) {
#pragma omp parallel for schedule(dynamic, 4)
    for (int64_t i = 0; i < n; ++i) fill(i, blocks[i]);
  } else {
    for (int64_t i = 0; i < n; ++i) fill(i, blocks[i]);
  }
  Cells out;
  for (Cells& b : blocks) out.insert(out.end(), b.begin(), b.end());
  return out;
}

LeafRelease MakeLeafRelease(std::string mechanism, const HierTree& truth,
                            const Cells& cells) {
  LeafRelease r;
  r.mechanism = std::move(mechanism);
  r.origins = truth.origins_ptr();
  r.destinations = truth.destinations_ptr();
  r.counts.reserve(cells.size());
  for (const auto& [k, v] : cells) {
    if (v != 0) r.counts[k.Pack()] = v;
  }
  return r;
}

absl::Status AddChecked(int64_t& acc, int64_t v) {
  if (__builtin_add_overflow(acc, v, &acc)) {
    return absl::OutOfRangeError("aggregate overflows int64");
  }
  return absl::OkStatus();
}

}  // namespace

std::vector<std::pair<NodeKey, int64_t>> LeafRelease::Sorted() const {
  std::vector<std::pair<NodeKey, int64_t>> out;
  out.reserve(counts.size());
  for (const auto& [k, v] : counts) out.emplace_back(NodeKey::Unpack(k), v);
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

absl::StatusOr<LeafRelease> VanillaGauss(const HierTree& truth,
                                         const PrivacyBudget& budget,
                                         const SensitivityModel& sensitivity,
                                         uint64_t seed, Execution execution,
                                         double universe_cap) {
  RETURN_IF_ERROR(sensitivity.Validate());
  const int g = truth.origins().levels();
  const size_t n_o = truth.origins().size(g);
  const size_t n_d = truth.destinations().size(g);
  const double universe = static_cast<double>(n_o) * static_cast<double>(n_d);
  if (universe > universe_cap) {
    return absl::ResourceExhaustedError(absl::StrCat(
        "leaf universe of ", universe, " pairs exceeds the cap of ",
        universe_cap));
  }
  const double sigma2 =
      static_cast<double>(sensitivity.L2SensitivitySquared()) /
      (2 * budget.rho());
  ASSIGN_OR_RETURN(const DiscreteGaussianSampler noise,
                   DiscreteGaussianSampler::Create(sigma2));
  const int leaf = truth.depth();
  const Cells cells = ForEachBlock(
      static_cast<int64_t>(n_o), execution, [&](int64_t o, Cells& out) {
        out.reserve(n_d);
        for (AreaId d = 0; d < n_d; ++d) {
          const NodeKey key{static_cast<AreaId>(o), d};
          RandomStream rng = LeafStream(seed, key);
          out.emplace_back(key, truth.Attribute(leaf, key) + noise.Sample(rng));
        }
      });
  return MakeLeafRelease("vanilla-gauss", truth, cells);
}

absl::StatusOr<LeafRelease> StabilityHistogram(
    const HierTree& truth, const PrivacyBudget& budget,
    const SensitivityModel& sensitivity, uint64_t seed, Execution execution) {
  RETURN_IF_ERROR(sensitivity.CheckStabilityHistogramSupported());
  const double epsilon = budget.epsilon();
  ASSIGN_OR_RETURN(const double threshold,
                   StabilityThreshold(epsilon, budget.delta()));
  ASSIGN_OR_RETURN(const DiscreteLaplaceSampler noise,
                   DiscreteLaplaceSampler::Create(2.0 / epsilon));
  const auto support = truth.SortedLevel(truth.depth());
  const Cells cells = ForEachBlock(
      static_cast<int64_t>(support.size()), execution,
      [&](int64_t i, Cells& out) {
        const auto& [key, count] = support[i];
        if (count <= 0) return;
        RandomStream rng = LeafStream(seed, key);
        const int64_t noisy = count + noise.Sample(rng);
        if (static_cast<double>(noisy) >= threshold) out.emplace_back(key, noisy);
      });
  return MakeLeafRelease("sh", truth, cells);
}

std::vector<double> ProjectOntoScaledSimplex(absl::Span<const double> x,
                                             double c) {
  std::vector<double> sorted(x.begin(), x.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double prefix = 0;
  // k = 1 is always active for c > 0; at c = 0 no k passes and every entry
  // must drop to zero.
  double theta = sorted.empty() ? 0 : sorted[0] - c;
  for (size_t k = 1; k <= sorted.size(); ++k) {
    prefix += sorted[k - 1];
    const double t = (prefix - c) / static_cast<double>(k);
    if (sorted[k - 1] > t) theta = t;
  }
  std::vector<double> y(x.size());
  for (size_t i = 0; i < x.size(); ++i) y[i] = std::max(x[i] - theta, 0.0);
  return y;
}

absl::StatusOr<std::vector<int64_t>> RoundedL2Projection(
    absl::Span<const int64_t> x, int64_t c) {
  if (x.empty()) {
    return absl::InvalidArgumentError("projection vector must be non-empty");
  }
  if (c < 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("target sum must be non-negative, got ", c));
  }
  std::vector<int64_t> y(x.size(), 0);
  if (c == 0) return y;

  std::vector<size_t> idx(x.size());
  std::iota(idx.begin(), idx.end(), size_t{0});
  std::stable_sort(idx.begin(), idx.end(),
                   [&](size_t a, size_t b) { return x[a] > x[b]; });
  int128 prefix = 0;
  int128 k = 0;
  int128 s_k = 0;
  for (size_t j = 0; j < idx.size(); ++j) {
    prefix += x[idx[j]];
    const int128 kk = static_cast<int128>(j) + 1;
    if (kk * x[idx[j]] > prefix - c) {
      k = kk;
      s_k = prefix;
    }
  }
  // Active entries, in descending-x order with ascending index on ties,
  // which is also the order in which they receive the remainder.
  int128 assigned = 0;
  std::vector<size_t> active;
  for (size_t i : idx) {
    const int128 num = k * x[i] - s_k + c;
    if (num <= 0) continue;
    y[i] = static_cast<int64_t>(num / k);
    assigned += y[i];
    active.push_back(i);
  }
  int128 remainder = static_cast<int128>(c) - assigned;
  if (remainder < 0 || remainder > static_cast<int128>(active.size())) {
    return absl::InternalError("l2 rounding remainder out of range");
  }
  for (size_t i : active) {
    if (remainder == 0) break;
    ++y[i];
    --remainder;
  }
  return y;
}

absl::StatusOr<DPRelease> TdaL2(const HierTree& truth,
                                const ReleaseConfig& config,
                                Execution execution) {
  const ChildSolver solver =
      [](absl::Span<const int64_t> noisy, int64_t c,
         RandomStream&) { return RoundedL2Projection(noisy, c); };
  return TopDownRelease(truth, config, solver, "tda-l2", execution);
}

absl::StatusOr<DPRelease> TdaLinfRandom(const HierTree& truth,
                                        const ReleaseConfig& config,
                                        Execution execution) {
  ASSIGN_OR_RETURN(
      DPRelease r,
      TopDownRelease(truth, config, ChebyshevSolver(OrderKind::kRandom),
                     "tda-linf-random", execution));
  r.metadata.order = OrderKind::kRandom;
  return r;
}

absl::StatusOr<HierTree> AggregateUp(const LeafRelease& release,
                                     TreeMode mode) {
  ASSIGN_OR_RETURN(HierTree tree, HierTree::Create(release.origins,
                                                   release.destinations, mode));
  const int g = release.origins->levels();
  const int depth = tree.depth();
  std::vector<absl::flat_hash_map<uint64_t, int64_t>> sums(depth + 1);
  for (const auto& [key, v] : release.Sorted()) {
    for (int d = 0; d <= depth; ++d) {
      const NodeKey up{
          release.origins->Ancestor(g, key.origin, tree.OriginLevel(d)),
          release.destinations->Ancestor(g, key.destination,
                                         tree.DestinationLevel(d))};
      RETURN_IF_ERROR(AddChecked(sums[d][up.Pack()], v));
    }
  }
  for (int d = 0; d <= depth; ++d) {
    for (const auto& [k, v] : sums[d]) {
      tree.SetAttribute(d, NodeKey::Unpack(k), v);
    }
  }
  return tree;
}

}  // namespace topdown
