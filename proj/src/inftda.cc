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

#include "topdown/inftda.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "topdown/samplers.h"
#include "topdown/status_macros.h"

namespace topdown {
namespace {

using Children = std::vector<std::pair<NodeKey, int64_t>>;

double MillisSince(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - start)
      .count();
}

// Noise + optimization for one parent. Returns its positive children.
absl::StatusOr<Children> SolveParent(const HierTree& truth, int depth,
                                     NodeKey key, int64_t c,
                                     const DiscreteGaussianSampler& noise,
                                     const ChildSolver& solver,
                                     uint64_t seed) {
  const std::vector<NodeKey> universe = truth.Children(depth, key);
  RandomStream rng(seed, {static_cast<uint64_t>(StreamTag::kTopDownNode),
                          static_cast<uint64_t>(depth), key.Pack()});
  std::vector<int64_t> noisy(universe.size());
  for (size_t i = 0; i < universe.size(); ++i) {
    const int64_t z = noise.Sample(rng);
    if (__builtin_add_overflow(truth.Attribute(depth + 1, universe[i]), z,
                               &noisy[i])) {
      return absl::OutOfRangeError("noisy count overflows int64");
    }
  }
  ASSIGN_OR_RETURN(const std::vector<int64_t> y, solver(noisy, c, rng));
  if (y.size() != universe.size()) {
    return absl::InternalError(absl::StrCat(
        "child solver returned ", y.size(), " entries for ", universe.size()));
  }
  Children out;
  for (size_t i = 0; i < y.size(); ++i) {
    if (y[i] > 0) out.emplace_back(universe[i], y[i]);
  }
  return out;
}

absl::Status DescendSerial(const HierTree& truth, int depth,
                           const DiscreteGaussianSampler& noise,
                           const ChildSolver& solver, uint64_t seed,
                           HierTree& released) {
  for (const auto& [key, c] : released.SortedLevel(depth)) {
    if (c <= 0) continue;
    ASSIGN_OR_RETURN(const Children kids,
                     SolveParent(truth, depth, key, c, noise, solver, seed));
    for (const auto& [child, v] : kids) {
      released.SetAttribute(depth + 1, child, v);
    }
  }
  return absl::OkStatus();
}

absl::Status DescendParallel(const HierTree& truth, int depth,
                             const DiscreteGaussianSampler& noise,
                             const ChildSolver& solver, uint64_t seed,
                             HierTree& released) {
  const auto parents = released.SortedLevel(depth);
  const auto n = static_cast<int64_t>(parents.size());
  std::vector<absl::StatusOr<Children>> results(parents.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (int64_t i = 0; i < n; ++i) {
    const auto& [key, c] = parents[i];
    if (c <= 0) {
      results[i] = Children{};
      continue;
    }
    results[i] = SolveParent(truth, depth, key, c, noise, solver, seed);
  }
  for (auto& r : results) {
    if (!r.ok()) return r.status();
    for (const auto& [child, v] : *r) {
      released.SetAttribute(depth + 1, child, v);
    }
  }
  return absl::OkStatus();
}

}  // namespace

nlohmann::json MetadataToJson(const ReleaseMetadata& meta) {
  nlohmann::json levels = nlohmann::json::array();
  for (const LevelStats& s : meta.per_level) {
    levels.push_back({{"node_count", s.node_count}, {"wall_ms", s.wall_ms}});
  }
  nlohmann::json j = {
      {"mechanism", meta.mechanism},
      {"mode", std::string(PrivacyTypeName(meta.mode))},
      {"tree", std::string(TreeModeName(meta.tree))},
      {"rho", meta.rho},
      {"epsilon", meta.epsilon},
      {"delta", meta.delta},
      {"sensitivity",
       {{"type", std::string(PrivacyTypeName(meta.sensitivity.type))},
        {"m", meta.sensitivity.max_trips},
        {"distinct", meta.sensitivity.distinct}}},
      {"seed", meta.seed},
      {"depth", meta.depth},
      {"sigma2", meta.sigma2},
      {"rho_consumed", meta.rho_consumed},
      {"per_level", levels},
  };
  j["order"] = meta.order ? nlohmann::json(std::string(OrderKindName(*meta.order)))
                          : nlohmann::json(nullptr);
  return j;
}

ChildSolver ChebyshevSolver(OrderKind order) {
  return [order](absl::Span<const int64_t> noisy, int64_t c,
                 RandomStream& rng) -> absl::StatusOr<std::vector<int64_t>> {
    ReductionOrder o{order, 0};
    if (order == OrderKind::kRandom) o.seed = rng.NextU64();
    ASSIGN_OR_RETURN(OptSolution s, IntOptFast(noisy, c, o));
    return std::move(s.y);
  };
}

absl::StatusOr<DPRelease> TopDownRelease(const HierTree& truth,
                                         const ReleaseConfig& config,
                                         const ChildSolver& solver,
                                         std::string mechanism,
                                         Execution execution) {
  RETURN_IF_ERROR(config.sensitivity.Validate());
  if (const auto bad = ValidateConsistency(truth); !bad.empty()) {
    return absl::FailedPreconditionError(absl::StrCat(
        "input tree is inconsistent at ", bad.size(), " node(s), first at depth ",
        bad.front().depth));
  }
  const int levels = truth.depth();
  ASSIGN_OR_RETURN(const double sigma2,
                   PerLevelSigma2(config.budget, config.sensitivity, levels));
  ASSIGN_OR_RETURN(const DiscreteGaussianSampler noise,
                   DiscreteGaussianSampler::Create(sigma2));

  ReleaseMetadata meta;
  meta.mechanism = std::move(mechanism);
  meta.tree = truth.mode();
  meta.mode = config.sensitivity.type;
  meta.rho = config.budget.rho();
  meta.epsilon = config.budget.epsilon();
  meta.delta = config.budget.delta();
  meta.sensitivity = config.sensitivity;
  meta.seed = config.seed;
  meta.depth = levels;
  meta.sigma2 = noise.sigma2();
  meta.per_level.resize(levels + 1);
  ZcdpAccountant accountant(config.budget.rho());

  ASSIGN_OR_RETURN(HierTree released,
                   HierTree::Create(truth.origins_ptr(),
                                    truth.destinations_ptr(), truth.mode()));
  auto start = std::chrono::steady_clock::now();
  int64_t root = truth.root();
  if (config.sensitivity.type == PrivacyType::kUnbounded) {
    // The total is private too; it gets variance T / rho.
    const double root_sigma2 = static_cast<double>(levels) / config.budget.rho();
    ASSIGN_OR_RETURN(const DiscreteGaussianSampler root_noise,
                     DiscreteGaussianSampler::Create(root_sigma2));
    RandomStream rng(config.seed,
                     {static_cast<uint64_t>(StreamTag::kTopDownRoot)});
    const int64_t z = root_noise.Sample(rng);
    if (__builtin_add_overflow(root, z, &root)) {
      return absl::OutOfRangeError("noisy total overflows int64");
    }
    root = std::max<int64_t>(root, 0);
    const int64_t m = config.sensitivity.max_trips;
    RETURN_IF_ERROR(accountant.Charge({m * m, 2 * int64_t{levels}}));
  }
  released.SetAttribute(0, NodeKey{}, root);
  meta.per_level[0] = {released.NodeCount(0), MillisSince(start)};

  for (int d = 0; d < levels; ++d) {
    start = std::chrono::steady_clock::now();
    if (execution == Execution::kParallel) {
      RETURN_IF_ERROR(
          DescendParallel(truth, d, noise, solver, config.seed, released));
    } else {
      RETURN_IF_ERROR(
          DescendSerial(truth, d, noise, solver, config.seed, released));
    }
    RETURN_IF_ERROR(accountant.Charge({1, levels}));
    meta.per_level[d + 1] = {released.NodeCount(d + 1), MillisSince(start)};
  }
  meta.rho_consumed = accountant.spent_rho();
  return DPRelease{std::move(released), std::move(meta)};
}

absl::StatusOr<DPRelease> Release(const HierTree& truth,
                                  const ReleaseConfig& config) {
  ASSIGN_OR_RETURN(DPRelease r,
                   TopDownRelease(truth, config, ChebyshevSolver(config.order),
                                  "inftda", Execution::kParallel));
  r.metadata.order = config.order;
  return r;
}

absl::StatusOr<DPRelease> ReleaseSerial(const HierTree& truth,
                                        const ReleaseConfig& config) {
  ASSIGN_OR_RETURN(DPRelease r,
                   TopDownRelease(truth, config, ChebyshevSolver(config.order),
                                  "inftda", Execution::kSerial));
  r.metadata.order = config.order;
  return r;
}

absl::StatusOr<std::vector<ExportRow>> ExportTable(const HierTree& tree,
                                                   int depth) {
  if (depth < 0 || depth > tree.depth()) {
    return absl::OutOfRangeError(absl::StrCat(
        "export depth ", depth, " outside [0, ", tree.depth(), "]"));
  }
  const int ol = tree.OriginLevel(depth);
  const int dl = tree.DestinationLevel(depth);
  std::vector<ExportRow> rows;
  for (const auto& [key, v] : tree.SortedLevel(depth)) {
    if (v == 0) continue;
    rows.push_back({tree.origins().code(ol, key.origin),
                    tree.destinations().code(dl, key.destination), v});
  }
  return rows;
}

absl::StatusOr<double> TheoreticalErrorEnvelope(int level, double sigma2,
                                                int branching, double beta) {
  if (level < 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("level must be >= 0, got ", level));
  }
  if (branching < 2) {
    return absl::InvalidArgumentError(
        absl::StrCat("branching factor must be >= 2, got ", branching));
  }
  if (!(beta > 0 && beta < 1)) {
    return absl::InvalidArgumentError(
        absl::StrCat("failure probability must be in (0, 1), got ", beta));
  }
  if (!(sigma2 > 0) || !std::isfinite(sigma2)) {
    return absl::InvalidArgumentError(
        absl::StrCat("sigma2 must be finite and > 0, got ", sigma2));
  }
  if (level == 0) return 0.0;
  const double l = level;
  const double b = branching;
  const double log_term = std::log(2 * b * l / beta) + l * std::log(b);
  return 2 * l * std::sqrt(2 * sigma2 * log_term);
}

std::optional<int> RegularBranchingFactor(const HierTree& tree) {
  const auto o = tree.origins().UniformBranching();
  const auto d = tree.destinations().UniformBranching();
  if (!o || !d || *o != *d) return std::nullopt;
  return o;
}

}  // namespace topdown
