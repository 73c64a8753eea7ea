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

// Per-level utility metrics and the experiment driver.
//
// Error maxima range over the union of the true and released supports. A
// node absent from both contributes 0, so this equals the maximum over the
// full universe without enumerating it.

#ifndef TOPDOWN_EVAL_H_
#define TOPDOWN_EVAL_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "nlohmann/json.hpp"
#include "topdown/accounting.h"
#include "topdown/baselines.h"
#include "topdown/hier_tree.h"
#include "topdown/inftda.h"

namespace topdown {

absl::StatusOr<std::vector<int64_t>> MaxAbsErrorPerLevel(
    const HierTree& truth, const HierTree& release);

// 100 * |{released > 0, true = 0}| / |{released > 0}| at `depth`; 0 when
// nothing positive is released.
absl::StatusOr<double> FalseDiscoveryRate(const HierTree& truth,
                                          const HierTree& release, int depth);

struct LevelReport {
  int depth = 0;
  int64_t max_abs_error = 0;
  double false_discovery_rate = 0;
  // Positive released nodes at this depth.
  size_t released_node_count = 0;
};

absl::StatusOr<std::vector<LevelReport>> EvaluateRelease(
    const HierTree& truth, const HierTree& release);

enum class Mechanism {
  kInfTda,
  kTdaL2,
  kTdaLinfRandom,
  kVanillaGauss,
  kStabilityHistogram,
};

std::string_view MechanismName(Mechanism m);
absl::StatusOr<Mechanism> ParseMechanism(std::string_view name);

struct MechanismConfig {
  Mechanism mechanism = Mechanism::kInfTda;
  ReleaseConfig release;
  Execution execution = Execution::kParallel;
  double universe_cap = kDefaultUniverseCap;
};

struct MechanismOutput {
  // Every depth; leaf mechanisms are aggregated up.
  HierTree tree;
  ReleaseMetadata metadata;
  // Wall clock of the release call alone.
  double wall_ms = 0;
};

absl::StatusOr<MechanismOutput> RunMechanism(const HierTree& truth,
                                             const MechanismConfig& config);

struct ExperimentSpec {
  std::vector<Mechanism> mechanisms = {Mechanism::kInfTda};
  std::vector<double> epsilons = {0.1, 1.0, 10.0};
  double delta = 1e-8;
  // When set, replaces the epsilon grid with this single zCDP budget.
  std::optional<double> rho;
  int repeats = 10;
  uint64_t seed = 0;
  SensitivityModel sensitivity;
  OrderKind order = OrderKind::kAscending;
  // Concurrent repeats; 0 uses the OpenMP default.
  int workers = 0;
  double universe_cap = kDefaultUniverseCap;
};

struct Range {
  double min = 0;
  double mean = 0;
  double max = 0;
};

struct ExperimentRow {
  std::string mechanism;
  double epsilon = 0;
  double rho = 0;
  int depth = 0;
  Range max_abs_error;
  Range false_discovery_rate;
  Range released_node_count;
};

struct RunTiming {
  std::string mechanism;
  double epsilon = 0;
  int repeat = 0;
  double wall_ms = 0;
};

struct ExperimentReport {
  std::string dataset;
  std::vector<ExperimentRow> rows;
  std::vector<RunTiming> timings;
};

// Seed of repeat `r`; every mechanism and budget reuses it.
uint64_t RepeatSeed(uint64_t seed, int repeat);

absl::StatusOr<ExperimentReport> RunExperiment(const HierTree& truth,
                                               const ExperimentSpec& spec,
                                               std::string dataset);

// One row per (mechanism, budget, depth). Contains no timings, so equal
// seeds give equal bytes.
std::string ReportCsv(const ExperimentReport& report);

// The CSV rows plus timings and run metadata.
nlohmann::json ReportJson(const ExperimentReport& report,
                          const ExperimentSpec& spec);

}  // namespace topdown

#endif  // TOPDOWN_EVAL_H_
