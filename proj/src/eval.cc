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

#include "topdown/eval.h"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <limits>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "topdown/status_macros.h"

namespace topdown {
namespace {

absl::Status CheckCompatible(const HierTree& truth, const HierTree& release) {
  if (!truth.Compatible(release)) {
    return absl::InvalidArgumentError(
        "release is bound to a different hierarchy or tree mode");
  }
  return absl::OkStatus();
}

int64_t AbsDiff(int64_t a, int64_t b) {
  const __int128 d = static_cast<__int128>(a) - b;
  const __int128 m = d < 0 ? -d : d;
  return m > std::numeric_limits<int64_t>::max()
             ? std::numeric_limits<int64_t>::max()
             : static_cast<int64_t>(m);
}

ReleaseMetadata LeafMetadata(std::string mechanism, const HierTree& tree,
                             const ReleaseConfig& config, double sigma2) {
  ReleaseMetadata meta;
  meta.mechanism = std::move(mechanism);
  meta.tree = tree.mode();
  meta.mode = config.sensitivity.type;
  meta.rho = config.budget.rho();
  meta.epsilon = config.budget.epsilon();
  meta.delta = config.budget.delta();
  meta.sensitivity = config.sensitivity;
  meta.seed = config.seed;
  meta.depth = tree.depth();
  meta.sigma2 = sigma2;
  meta.rho_consumed = sigma2 > 0 ? config.budget.rho() : 0;
  meta.per_level.resize(tree.depth() + 1);
  for (int d = 0; d <= tree.depth(); ++d) {
    meta.per_level[d].node_count = tree.NodeCount(d);
  }
  return meta;
}

Range Summarize(const std::vector<double>& v) {
  Range r;
  if (v.empty()) return r;
  r.min = *std::min_element(v.begin(), v.end());
  r.max = *std::max_element(v.begin(), v.end());
  double s = 0;
  for (double x : v) s += x;
  r.mean = s / static_cast<double>(v.size());
  return r;
}

std::string Num(double v) { return absl::StrFormat("%.10g", v); }

}  // namespace

absl::StatusOr<std::vector<int64_t>> MaxAbsErrorPerLevel(
    const HierTree& truth, const HierTree& release) {
  RETURN_IF_ERROR(CheckCompatible(truth, release));
  std::vector<int64_t> out(truth.depth() + 1, 0);
  for (int d = 0; d <= truth.depth(); ++d) {
    int64_t worst = 0;
    for (const auto& [k, v] : truth.level(d)) {
      worst = std::max(worst, AbsDiff(release.Attribute(d, NodeKey::Unpack(k)), v));
    }
    for (const auto& [k, v] : release.level(d)) {
      if (!truth.level(d).contains(k)) worst = std::max(worst, AbsDiff(v, 0));
    }
    out[d] = worst;
  }
  return out;
}

absl::StatusOr<double> FalseDiscoveryRate(const HierTree& truth,
                                          const HierTree& release, int depth) {
  RETURN_IF_ERROR(CheckCompatible(truth, release));
  if (depth < 0 || depth > truth.depth()) {
    return absl::OutOfRangeError(absl::StrCat("depth ", depth, " out of range"));
  }
  size_t positive = 0;
  size_t spurious = 0;
  for (const auto& [k, v] : release.level(depth)) {
    if (v <= 0) continue;
    ++positive;
    if (truth.Attribute(depth, NodeKey::Unpack(k)) == 0) ++spurious;
  }
  if (positive == 0) return 0.0;
  return 100.0 * static_cast<double>(spurious) / static_cast<double>(positive);
}

absl::StatusOr<std::vector<LevelReport>> EvaluateRelease(
    const HierTree& truth, const HierTree& release) {
  ASSIGN_OR_RETURN(const std::vector<int64_t> errors,
                   MaxAbsErrorPerLevel(truth, release));
  std::vector<LevelReport> out;
  for (int d = 0; d <= truth.depth(); ++d) {
    LevelReport r;
    r.depth = d;
    r.max_abs_error = errors[d];
    ASSIGN_OR_RETURN(r.false_discovery_rate,
                     FalseDiscoveryRate(truth, release, d));
    for (const auto& [k, v] : release.level(d)) {
      if (v > 0) ++r.released_node_count;
    }
    out.push_back(r);
  }
  return out;
}

std::string_view MechanismName(Mechanism m) {
  switch (m) {
    case Mechanism::kInfTda:
      return "inftda";
    case Mechanism::kTdaL2:
      return "tda-l2";
    case Mechanism::kTdaLinfRandom:
      return "tda-linf-random";
    case Mechanism::kVanillaGauss:
      return "vanilla-gauss";
    case Mechanism::kStabilityHistogram:
      return "sh";
  }
  return "?";
}

absl::StatusOr<Mechanism> ParseMechanism(std::string_view name) {
  for (Mechanism m :
       {Mechanism::kInfTda, Mechanism::kTdaL2, Mechanism::kTdaLinfRandom,
        Mechanism::kVanillaGauss, Mechanism::kStabilityHistogram}) {
    if (name == MechanismName(m)) return m;
  }
  return absl::InvalidArgumentError(absl::StrCat(
      "unknown mechanism '", std::string(name),
      "' (expected inftda, tda-l2, tda-linf-random, vanilla-gauss or sh)"));
}

absl::StatusOr<MechanismOutput> RunMechanism(const HierTree& truth,
                                             const MechanismConfig& config) {
  const ReleaseConfig& rc = config.release;
  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - start)
        .count();
  };
  switch (config.mechanism) {
    case Mechanism::kInfTda:
    case Mechanism::kTdaL2:
    case Mechanism::kTdaLinfRandom: {
      absl::StatusOr<DPRelease> r;
      if (config.mechanism == Mechanism::kInfTda) {
        r = config.execution == Execution::kParallel ? Release(truth, rc)
                                                     : ReleaseSerial(truth, rc);
      } else if (config.mechanism == Mechanism::kTdaL2) {
        r = TdaL2(truth, rc, config.execution);
      } else {
        r = TdaLinfRandom(truth, rc, config.execution);
      }
      if (!r.ok()) return r.status();
      const double ms = elapsed();
      return MechanismOutput{std::move(r->tree), std::move(r->metadata), ms};
    }
    case Mechanism::kVanillaGauss:
    case Mechanism::kStabilityHistogram: {
      absl::StatusOr<LeafRelease> leaves =
          config.mechanism == Mechanism::kVanillaGauss
              ? VanillaGauss(truth, rc.budget, rc.sensitivity, rc.seed,
                             config.execution, config.universe_cap)
              : StabilityHistogram(truth, rc.budget, rc.sensitivity, rc.seed,
                                   config.execution);
      if (!leaves.ok()) return leaves.status();
      const double ms = elapsed();
      ASSIGN_OR_RETURN(HierTree tree, AggregateUp(*leaves, truth.mode()));
      const double sigma2 =
          config.mechanism == Mechanism::kVanillaGauss
              ? static_cast<double>(rc.sensitivity.L2SensitivitySquared()) /
                    (2 * rc.budget.rho())
              : 0.0;
      ReleaseMetadata meta =
          LeafMetadata(std::string(MechanismName(config.mechanism)), tree, rc,
                       sigma2);
      meta.per_level.back().wall_ms = ms;
      return MechanismOutput{std::move(tree), std::move(meta), ms};
    }
  }
  return absl::InternalError("unhandled mechanism");
}

uint64_t RepeatSeed(uint64_t seed, int repeat) {
  return RandomStream::Derive(
      seed, {static_cast<uint64_t>(StreamTag::kRepeat),
             static_cast<uint64_t>(repeat)});
}

absl::StatusOr<ExperimentReport> RunExperiment(const HierTree& truth,
                                               const ExperimentSpec& spec,
                                               std::string dataset) {
  if (spec.repeats < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("repeats must be >= 1, got ", spec.repeats));
  }
  if (spec.mechanisms.empty()) {
    return absl::InvalidArgumentError("no mechanisms requested");
  }
  std::vector<PrivacyBudget> budgets;
  if (spec.rho) {
    ASSIGN_OR_RETURN(PrivacyBudget b, PrivacyBudget::FromRho(*spec.rho, spec.delta));
    budgets.push_back(b);
  } else {
    for (double eps : spec.epsilons) {
      ASSIGN_OR_RETURN(PrivacyBudget b,
                       PrivacyBudget::FromEpsilonDelta(eps, spec.delta));
      budgets.push_back(b);
    }
  }
  if (budgets.empty()) return absl::InvalidArgumentError("no budgets requested");

  struct Job {
    size_t budget;
    size_t mechanism;
    int repeat;
  };
  std::vector<Job> jobs;
  for (size_t b = 0; b < budgets.size(); ++b) {
    for (size_t m = 0; m < spec.mechanisms.size(); ++m) {
      for (int r = 0; r < spec.repeats; ++r) jobs.push_back({b, m, r});
    }
  }
  struct Outcome {
    absl::Status status;
    std::vector<LevelReport> levels;
    double wall_ms = 0;
  };
  std::vector<Outcome> outcomes(jobs.size());
  const int workers = spec.workers > 0 ? spec.workers : omp_get_max_threads();
  const auto n_jobs = static_cast<int64_t>(jobs.size());
#pragma omp parallel for schedule(dynamic) num_threads(workers)
  for (int64_t i = 0; i < n_jobs; ++i) {
    const Job& job = jobs[i];
    MechanismConfig mc{
        spec.mechanisms[job.mechanism],
        ReleaseConfig{budgets[job.budget], spec.sensitivity, spec.order,
                      RepeatSeed(spec.seed, job.repeat)},
        Execution::kSerial, spec.universe_cap};
    auto out = RunMechanism(truth, mc);
    if (!out.ok()) {
      outcomes[i].status = out.status();
      continue;
    }
    auto levels = EvaluateRelease(truth, out->tree);
    if (!levels.ok()) {
      outcomes[i].status = levels.status();
      continue;
    }
    outcomes[i].levels = *std::move(levels);
    outcomes[i].wall_ms = out->wall_ms;
  }

  ExperimentReport report;
  report.dataset = std::move(dataset);
  const int depth = truth.depth();
  size_t i = 0;
  for (size_t b = 0; b < budgets.size(); ++b) {
    for (size_t m = 0; m < spec.mechanisms.size(); ++m) {
      const std::string name(MechanismName(spec.mechanisms[m]));
      std::vector<std::vector<double>> err(depth + 1), fdr(depth + 1),
          nodes(depth + 1);
      for (int r = 0; r < spec.repeats; ++r, ++i) {
        const Outcome& o = outcomes[i];
        if (!o.status.ok()) {
          return absl::Status(o.status.code(),
                              absl::StrCat(name, ": ", o.status.message()));
        }
        report.timings.push_back(
            {name, budgets[b].epsilon(), r, o.wall_ms});
        for (const LevelReport& l : o.levels) {
          err[l.depth].push_back(static_cast<double>(l.max_abs_error));
          fdr[l.depth].push_back(l.false_discovery_rate);
          nodes[l.depth].push_back(static_cast<double>(l.released_node_count));
        }
      }
      for (int d = 0; d <= depth; ++d) {
        report.rows.push_back({name, budgets[b].epsilon(), budgets[b].rho(), d,
                               Summarize(err[d]), Summarize(fdr[d]),
                               Summarize(nodes[d])});
      }
    }
  }
  return report;
}

std::string ReportCsv(const ExperimentReport& report) {
  std::string out =
      "mechanism,epsilon,rho,depth,max_abs_error_min,max_abs_error_mean,"
      "max_abs_error_max,fdr_min,fdr_mean,fdr_max,nodes_min,nodes_mean,"
      "nodes_max\n";
  for (const ExperimentRow& r : report.rows) {
    absl::StrAppend(&out, r.mechanism, ",", Num(r.epsilon), ",", Num(r.rho),
                    ",", r.depth, ",", Num(r.max_abs_error.min), ",",
                    Num(r.max_abs_error.mean), ",", Num(r.max_abs_error.max),
                    ",", Num(r.false_discovery_rate.min), ",",
                    Num(r.false_discovery_rate.mean), ",",
                    Num(r.false_discovery_rate.max), ",",
                    Num(r.released_node_count.min), ",",
                    Num(r.released_node_count.mean), ",",
                    Num(r.released_node_count.max), "\n");
  }
  return out;
}

nlohmann::json ReportJson(const ExperimentReport& report,
                          const ExperimentSpec& spec) {
  nlohmann::json rows = nlohmann::json::array();
  for (const ExperimentRow& r : report.rows) {
    auto range = [](const Range& x) {
      return nlohmann::json{{"min", x.min}, {"mean", x.mean}, {"max", x.max}};
    };
    rows.push_back({{"mechanism", r.mechanism},
                    {"epsilon", r.epsilon},
                    {"rho", r.rho},
                    {"depth", r.depth},
                    {"max_abs_error", range(r.max_abs_error)},
                    {"false_discovery_rate", range(r.false_discovery_rate)},
                    {"released_node_count", range(r.released_node_count)}});
  }
  nlohmann::json timings = nlohmann::json::array();
  for (const RunTiming& t : report.timings) {
    timings.push_back({{"mechanism", t.mechanism},
                       {"epsilon", t.epsilon},
                       {"repeat", t.repeat},
                       {"wall_ms", t.wall_ms}});
  }
  nlohmann::json mechanisms = nlohmann::json::array();
  for (Mechanism m : spec.mechanisms) mechanisms.push_back(MechanismName(m));
  return {{"dataset", report.dataset},
          {"mechanisms", mechanisms},
          {"delta", spec.delta},
          {"repeats", spec.repeats},
          {"seed", spec.seed},
          {"order", OrderKindName(spec.order)},
          {"sensitivity",
           {{"type", PrivacyTypeName(spec.sensitivity.type)},
            {"m", spec.sensitivity.max_trips},
            {"distinct", spec.sensitivity.distinct}}},
          {"rows", rows},
          {"timings", timings}};
}

}  // namespace topdown
