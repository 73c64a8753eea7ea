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

// Command-line front end: ingest, synth, release, evaluate, sweep.
//
// Exit codes: 0 success, 1 internal, 2 invalid input or usage, 3 file I/O,
// 4 resource or numeric limits, 5 failed precondition.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "nlohmann/json.hpp"
#include "topdown/accounting.h"
#include "topdown/dataset_io.h"
#include "topdown/eval.h"
#include "topdown/inftda.h"
#include "topdown/status_macros.h"
#include "topdown/synth.h"

namespace topdown {
namespace {

int ExitCode(const absl::Status& s) {
  switch (s.code()) {
    case absl::StatusCode::kOk:
      return 0;
    case absl::StatusCode::kInvalidArgument:
      return 2;
    case absl::StatusCode::kNotFound:
    case absl::StatusCode::kPermissionDenied:
    case absl::StatusCode::kDataLoss:
      return 3;
    case absl::StatusCode::kResourceExhausted:
    case absl::StatusCode::kOutOfRange:
      return 4;
    case absl::StatusCode::kFailedPrecondition:
      return 5;
    default:
      return 1;
  }
}

std::string Category(const absl::Status& s) {
  switch (ExitCode(s)) {
    case 2:
      return "invalid-input";
    case 3:
      return "io";
    case 4:
      return "limit";
    case 5:
      return "precondition";
    default:
      return "internal";
  }
}

absl::Status WriteText(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) return absl::PermissionDeniedError(absl::StrCat("cannot write ", path));
  out << text;
  out.close();
  if (!out) return absl::DataLossError(absl::StrCat("write failed: ", path));
  return absl::OkStatus();
}

// Flags shared by `release` and `sweep` entries.
struct PrivacyFlags {
  std::optional<double> epsilon;
  std::optional<double> rho;
  double delta = 1e-8;
  std::string privacy = "bounded";
  int64_t m = 1;
  bool non_distinct = false;

  absl::StatusOr<SensitivityModel> Sensitivity() const {
    SensitivityModel s;
    ASSIGN_OR_RETURN(s.type, ParsePrivacyType(privacy));
    s.max_trips = m;
    s.distinct = !non_distinct;
    RETURN_IF_ERROR(s.Validate());
    return s;
  }

  absl::StatusOr<PrivacyBudget> Budget() const {
    if (epsilon.has_value() == rho.has_value()) {
      return absl::InvalidArgumentError(
          "give exactly one of --epsilon or --rho");
    }
    if (rho) return PrivacyBudget::FromRho(*rho, delta);
    return PrivacyBudget::FromEpsilonDelta(*epsilon, delta);
  }
};

struct IngestArgs {
  std::string hierarchy_o, hierarchy_d, trips, out;
};

absl::Status RunIngest(const IngestArgs& a) {
  ASSIGN_OR_RETURN(const Dataset data,
                   IngestCsv(a.hierarchy_o, a.hierarchy_d, a.trips));
  RETURN_IF_ERROR(SaveDataset(data, a.out));
  std::cout << "ingested " << data.trips.counts.size() << " O/D pairs, "
            << data.trips.total << " trips, g = " << data.origins->levels()
            << "\n";
  return absl::OkStatus();
}

struct SynthArgs {
  std::string kind = "binary";
  std::string sparsity = "complete";
  double exponent = 2.0;
  uint64_t seed = 0;
  int levels = 0;
  std::string out;
  std::string data;
};

absl::StatusOr<SynthSpec> MakeSynthSpec(const std::string& kind,
                                        const std::string& sparsity,
                                        double exponent, uint64_t seed,
                                        int levels) {
  SynthSpec spec;
  ASSIGN_OR_RETURN(spec.kind, ParsePartitionKind(kind));
  ASSIGN_OR_RETURN(spec.sparsity, ParseSparsity(sparsity));
  spec.exponent = exponent;
  spec.seed = seed;
  spec.levels = levels;
  RETURN_IF_ERROR(spec.Validate());
  return spec;
}

absl::Status RunSynth(const SynthArgs& a) {
  ASSIGN_OR_RETURN(const SynthSpec spec,
                   MakeSynthSpec(a.kind, a.sparsity, a.exponent, a.seed,
                                 a.levels));
  ASSIGN_OR_RETURN(const Dataset data, Generate(spec));
  RETURN_IF_ERROR(WriteSynthCsv(data, a.out));
  if (!a.data.empty()) RETURN_IF_ERROR(SaveDataset(data, a.data));
  const int g = data.origins->levels();
  std::cout << "leaves " << data.origins->size(g) << " x "
            << data.destinations->size(g) << ", pairs "
            << data.trips.counts.size() << ", trips " << data.trips.total
            << "\n";
  return absl::OkStatus();
}

struct ReleaseArgs {
  std::string data;
  std::string mechanism = "inftda";
  PrivacyFlags privacy;
  std::string order = "asc";
  uint64_t seed = 0;
  std::string tree = "destination";
  std::string out;
  std::string meta;
  std::string level = "all";
};

absl::Status RunRelease(const ReleaseArgs& a) {
  ASSIGN_OR_RETURN(const Mechanism mechanism, ParseMechanism(a.mechanism));
  ASSIGN_OR_RETURN(const TreeMode mode, ParseTreeMode(a.tree));
  ASSIGN_OR_RETURN(const OrderKind order, ParseOrderKind(a.order));
  ASSIGN_OR_RETURN(const PrivacyBudget budget, a.privacy.Budget());
  ASSIGN_OR_RETURN(const SensitivityModel sens, a.privacy.Sensitivity());
  ASSIGN_OR_RETURN(const Dataset data, LoadDataset(a.data));
  ASSIGN_OR_RETURN(const HierTree truth, BuildTree(data, mode));

  std::optional<int> depth;
  if (a.level == "leaves") {
    depth = truth.depth();
  } else if (a.level != "all") {
    int d;
    if (!absl::SimpleAtoi(a.level, &d)) {
      return absl::InvalidArgumentError(
          absl::StrCat("--level must be all, leaves or a depth, got ", a.level));
    }
    depth = d;
  }
  if (depth && (*depth < 0 || *depth > truth.depth())) {
    return absl::OutOfRangeError(absl::StrCat(
        "--level ", *depth, " outside [0, ", truth.depth(), "]"));
  }

  MechanismConfig mc{mechanism, ReleaseConfig{budget, sens, order, a.seed},
                     Execution::kParallel, kDefaultUniverseCap};
  ASSIGN_OR_RETURN(const MechanismOutput out, RunMechanism(truth, mc));
  RETURN_IF_ERROR(WriteReleaseCsv(out.tree, a.out, depth));
  if (!a.meta.empty()) {
    nlohmann::json j = MetadataToJson(out.metadata);
    j["wall_ms"] = out.wall_ms;
    RETURN_IF_ERROR(WriteText(a.meta, j.dump(2) + "\n"));
  }
  std::cout << MechanismName(mechanism) << ": released "
            << out.tree.NodeCount(truth.depth()) << " leaf pairs, root "
            << out.tree.root() << "\n";
  return absl::OkStatus();
}

struct EvaluateArgs {
  std::string truth;
  std::string release;
  std::string tree = "destination";
  std::string out;
};

absl::Status RunEvaluate(const EvaluateArgs& a) {
  ASSIGN_OR_RETURN(const TreeMode mode, ParseTreeMode(a.tree));
  ASSIGN_OR_RETURN(const Dataset data, LoadDataset(a.truth));
  ASSIGN_OR_RETURN(const HierTree truth, BuildTree(data, mode));
  ASSIGN_OR_RETURN(const HierTree release, ReadReleaseCsv(a.release, data, mode));
  ASSIGN_OR_RETURN(const std::vector<LevelReport> levels,
                   EvaluateRelease(truth, release));
  std::string csv =
      "depth,max_abs_error,false_discovery_rate,released_node_count\n";
  for (const LevelReport& l : levels) {
    absl::StrAppend(&csv, l.depth, ",", l.max_abs_error, ",",
                    absl::StrFormat("%.10g", l.false_discovery_rate), ",",
                    l.released_node_count, "\n");
  }
  if (a.out.empty()) {
    std::cout << csv;
    return absl::OkStatus();
  }
  return WriteText(a.out, csv);
}

// Sweep config:
// {
//   "out_dir": "reports", "mechanisms": ["inftda", "sh"],
//   "epsilons": [0.1, 1, 10], "delta": 1e-8, "repeats": 10, "seed": 1,
//   "order": "asc", "tree": "destination", "privacy": "bounded", "m": 1,
//   "distinct": true, "workers": 0,
//   "datasets": [
//     {"name": "binary-complete",
//      "synth": {"kind": "binary", "sparsity": "complete", "exponent": 2,
//                "seed": 7}},
//     {"name": "mine", "data": "data.bin"}
//   ]
// }
absl::Status RunSweep(const std::string& config_path) {
  std::ifstream in(config_path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", config_path));
  nlohmann::json cfg;
  try {
    cfg = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat(config_path, ": ", e.what()));
  }
  try {
    ExperimentSpec spec;
    spec.mechanisms.clear();
    for (const auto& m : cfg.value("mechanisms", nlohmann::json::array({"inftda"}))) {
      ASSIGN_OR_RETURN(Mechanism mech, ParseMechanism(m.get<std::string>()));
      spec.mechanisms.push_back(mech);
    }
    spec.epsilons = cfg.value("epsilons", spec.epsilons);
    spec.delta = cfg.value("delta", spec.delta);
    if (cfg.contains("rho")) spec.rho = cfg["rho"].get<double>();
    spec.repeats = cfg.value("repeats", spec.repeats);
    spec.seed = cfg.value("seed", spec.seed);
    spec.workers = cfg.value("workers", 0);
    ASSIGN_OR_RETURN(spec.order, ParseOrderKind(cfg.value("order", "asc")));
    ASSIGN_OR_RETURN(spec.sensitivity.type,
                     ParsePrivacyType(cfg.value("privacy", "bounded")));
    spec.sensitivity.max_trips = cfg.value("m", int64_t{1});
    spec.sensitivity.distinct = cfg.value("distinct", true);
    RETURN_IF_ERROR(spec.sensitivity.Validate());
    ASSIGN_OR_RETURN(const TreeMode mode,
                     ParseTreeMode(cfg.value("tree", "destination")));
    const std::string out_dir = cfg.value("out_dir", "reports");
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) {
      return absl::PermissionDeniedError(
          absl::StrCat("cannot create ", out_dir, ": ", ec.message()));
    }
    if (!cfg.contains("datasets") || cfg["datasets"].empty()) {
      return absl::InvalidArgumentError("sweep config lists no datasets");
    }
    for (const auto& ds : cfg["datasets"]) {
      const std::string name = ds.at("name").get<std::string>();
      Dataset data;
      if (ds.contains("synth")) {
        const auto& s = ds["synth"];
        ASSIGN_OR_RETURN(
            const SynthSpec synth,
            MakeSynthSpec(s.value("kind", "binary"),
                          s.value("sparsity", "complete"),
                          s.value("exponent", 2.0), s.value("seed", uint64_t{0}),
                          s.value("levels", 0)));
        ASSIGN_OR_RETURN(data, Generate(synth));
      } else {
        ASSIGN_OR_RETURN(data, LoadDataset(ds.at("data").get<std::string>()));
      }
      ASSIGN_OR_RETURN(const HierTree truth, BuildTree(data, mode));
      ASSIGN_OR_RETURN(const ExperimentReport report,
                       RunExperiment(truth, spec, name));
      const std::filesystem::path base = std::filesystem::path(out_dir) / name;
      RETURN_IF_ERROR(WriteText(base.string() + ".csv", ReportCsv(report)));
      RETURN_IF_ERROR(WriteText(base.string() + ".json",
                                ReportJson(report, spec).dump(2) + "\n"));
      std::cout << "wrote " << base.string() << ".csv\n";
    }
  } catch (const nlohmann::json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat(config_path, ": ", e.what()));
  }
  return absl::OkStatus();
}

void AddPrivacyFlags(CLI::App* cmd, PrivacyFlags& p) {
  cmd->add_option("--epsilon", p.epsilon, "epsilon of the (epsilon, delta) target");
  cmd->add_option("--rho", p.rho, "zCDP budget");
  cmd->add_option("--delta", p.delta, "delta (default 1e-8)");
  cmd->add_option("--privacy", p.privacy, "bounded | unbounded");
  cmd->add_option("--m", p.m, "maximum trips per user");
  cmd->add_flag("--non-distinct", p.non_distinct,
                "a user may repeat the same O/D pair");
}

}  // namespace
}  // namespace topdown

int main(int argc, char** argv) {
  using namespace topdown;
  CLI::App app{"Differentially private release of hierarchical O/D data"};
  app.require_subcommand(1);

  IngestArgs ingest;
  auto* c_ingest = app.add_subcommand("ingest", "CSV inputs to data.bin");
  c_ingest->add_option("--hierarchy-o", ingest.hierarchy_o)->required();
  c_ingest->add_option("--hierarchy-d", ingest.hierarchy_d)->required();
  c_ingest->add_option("--trips", ingest.trips)->required();
  c_ingest->add_option("--out", ingest.out)->required();

  SynthArgs synth;
  auto* c_synth = app.add_subcommand("synth", "generate a synthetic dataset");
  c_synth->add_option("--kind", synth.kind, "binary | random");
  c_synth->add_option("--sparsity", synth.sparsity,
                      "complete | dense | sparse | fraction");
  c_synth->add_option("--exponent", synth.exponent, "Pareto exponent (> 1)");
  c_synth->add_option("--seed", synth.seed);
  c_synth->add_option("--levels", synth.levels, "partition levels (0 = default)");
  c_synth->add_option("--out", synth.out, "output directory")->required();
  c_synth->add_option("--data", synth.data, "also write data.bin here");

  ReleaseArgs release;
  auto* c_release = app.add_subcommand("release", "run a mechanism");
  c_release->add_option("--data", release.data)->required();
  c_release->add_option("--mechanism", release.mechanism,
                        "inftda | tda-l2 | tda-linf-random | vanilla-gauss | sh");
  AddPrivacyFlags(c_release, release.privacy);
  c_release->add_option("--order", release.order, "asc | desc | random");
  c_release->add_option("--seed", release.seed);
  c_release->add_option("--tree", release.tree, "destination | origin");
  c_release->add_option("--out", release.out, "release CSV")->required();
  c_release->add_option("--meta", release.meta, "metadata JSON");
  c_release->add_option("--level", release.level, "all | leaves | depth");

  EvaluateArgs evaluate;
  auto* c_eval = app.add_subcommand("evaluate", "per-level error and FDR");
  c_eval->add_option("--truth", evaluate.truth)->required();
  c_eval->add_option("--release", evaluate.release)->required();
  c_eval->add_option("--tree", evaluate.tree, "destination | origin");
  c_eval->add_option("--out", evaluate.out, "report CSV (stdout if omitted)");

  std::string sweep_config;
  auto* c_sweep = app.add_subcommand("sweep", "run an experiment grid");
  c_sweep->add_option("--config", sweep_config)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  absl::Status status;
  if (*c_ingest) {
    status = RunIngest(ingest);
  } else if (*c_synth) {
    status = RunSynth(synth);
  } else if (*c_release) {
    status = RunRelease(release);
  } else if (*c_eval) {
    status = RunEvaluate(evaluate);
  } else if (*c_sweep) {
    status = RunSweep(sweep_config);
  }
  if (!status.ok()) {
    std::cerr << "error [" << Category(status) << "]: " << status.message()
              << "\n";
    return ExitCode(status);
  }
  return 0;
}
