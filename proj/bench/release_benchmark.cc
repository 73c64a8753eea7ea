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

// Serial reference vs OpenMP drivers on the synthetic regimes.
//
//   release_benchmark --benchmark_filter=Release
//
// Thread count follows OMP_NUM_THREADS.

#include <omp.h>

#include <cstdlib>
#include <map>
#include <random>
#include <utility>

#include "benchmark/benchmark.h"
#include "topdown/baselines.h"
#include "topdown/dataset_io.h"
#include "topdown/inftda.h"
#include "topdown/intopt.h"
#include "topdown/synth.h"

namespace topdown {
namespace {

// Regime index: 0 binary complete, 1 binary sparse, 2 random sparse.
const HierTree& Tree(int regime) {
  static auto* cache = new std::map<int, HierTree>();
  auto it = cache->find(regime);
  if (it != cache->end()) return it->second;
  SynthSpec spec;
  spec.kind = regime == 2 ? PartitionKind::kRandom : PartitionKind::kBinary;
  spec.sparsity = regime == 0 ? 1.0 : 0.01;
  spec.seed = regime == 2 ? 306 : 1;
  auto data = Generate(spec);
  if (!data.ok()) std::abort();
  auto tree = BuildTree(*data, TreeMode::kDestination);
  if (!tree.ok()) std::abort();
  return cache->emplace(regime, *std::move(tree)).first->second;
}

const char* RegimeName(int regime) {
  static const char* kNames[] = {"binary-complete", "binary-sparse",
                                 "random-sparse"};
  return kNames[regime];
}

ReleaseConfig Config(uint64_t seed) {
  return ReleaseConfig{*PrivacyBudget::FromEpsilonDelta(1.0, 1e-8),
                       SensitivityModel{}, OrderKind::kAscending, seed};
}

template <Execution kExecution>
void BM_Release(benchmark::State& state) {
  const int regime = static_cast<int>(state.range(0));
  const HierTree& truth = Tree(regime);
  uint64_t seed = 0;
  for (auto _ : state) {
    auto r = kExecution == Execution::kParallel
                 ? Release(truth, Config(seed++))
                 : ReleaseSerial(truth, Config(seed++));
    if (!r.ok()) state.SkipWithError("release failed");
    benchmark::DoNotOptimize(r);
  }
  state.SetLabel(RegimeName(regime));
  state.counters["threads"] =
      kExecution == Execution::kParallel ? omp_get_max_threads() : 1;
}
BENCHMARK_TEMPLATE(BM_Release, Execution::kSerial)
    ->DenseRange(0, 2)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_TEMPLATE(BM_Release, Execution::kParallel)
    ->DenseRange(0, 2)
    ->Unit(benchmark::kMillisecond);

template <Execution kExecution>
void BM_VanillaGauss(benchmark::State& state) {
  const HierTree& truth = Tree(0);
  const auto budget = *PrivacyBudget::FromEpsilonDelta(1.0, 1e-8);
  uint64_t seed = 0;
  for (auto _ : state) {
    auto r = VanillaGauss(truth, budget, SensitivityModel{}, seed++,
                          kExecution);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK_TEMPLATE(BM_VanillaGauss, Execution::kSerial)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_TEMPLATE(BM_VanillaGauss, Execution::kParallel)
    ->Unit(benchmark::kMillisecond);

std::pair<std::vector<int64_t>, int64_t> Instance(int64_t d) {
  std::mt19937_64 rng(d);
  std::uniform_int_distribution<int64_t> entry(-40, 40);
  std::vector<int64_t> x(d);
  for (auto& v : x) v = entry(rng);
  return {x, d};
}

void BM_IntOptFast(benchmark::State& state) {
  const auto [x, c] = Instance(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(IntOptFast(x, c, {OrderKind::kAscending, 0}));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_IntOptFast)->RangeMultiplier(4)->Range(16, 16384)->Complexity();

void BM_IntOptSimple(benchmark::State& state) {
  const auto [x, c] = Instance(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        IntOptSimple(OptProblem{x, c, {OrderKind::kAscending, 0}}));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_IntOptSimple)->RangeMultiplier(4)->Range(16, 1024)->Complexity();

}  // namespace
}  // namespace topdown

BENCHMARK_MAIN();
