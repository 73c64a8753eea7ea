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

#include "topdown/intopt.h"

#include <algorithm>
#include <limits>
#include <numeric>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "topdown/random.h"
#include "topdown/status_macros.h"

namespace topdown {
namespace {

using int128 = __int128;

constexpr int64_t kMin = std::numeric_limits<int64_t>::min();
constexpr int64_t kMax = std::numeric_limits<int64_t>::max();

absl::Status Overflow() {
  return absl::OutOfRangeError("integer overflow in Chebyshev optimization");
}

bool FitsInt64(int128 v) { return v >= kMin && v <= kMax; }

absl::Status Validate(absl::Span<const int64_t> x, int64_t c) {
  if (x.empty()) {
    return absl::InvalidArgumentError("optimization vector must be non-empty");
  }
  if (c < 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("target sum must be non-negative, got ", c));
  }
  for (int64_t v : x) {
    if (v == kMin) return Overflow();
  }
  return absl::OkStatus();
}

absl::StatusOr<int64_t> Sum(absl::Span<const int64_t> v) {
  int128 s = 0;
  for (int64_t e : v) s += e;
  if (!FitsInt64(s)) return Overflow();
  return static_cast<int64_t>(s);
}

// Ceiling of a / b for b > 0.
int64_t CeilDiv(int64_t a, int64_t b) {
  return a >= 0 ? a / b + (a % b != 0) : -((-a) / b);
}

// Working state shared by both solvers: z = y - x, its sum, the required
// sum `target` = c - sum(x) and the clip floor -t.
struct State {
  std::vector<int64_t> z;
  int64_t target = 0;
  int64_t sum = 0;
  int64_t t = 0;
};

absl::StatusOr<State> Initialize(absl::Span<const int64_t> x, int64_t c) {
  RETURN_IF_ERROR(Validate(x, c));
  ASSIGN_OR_RETURN(const int64_t sx, Sum(x));
  const int128 target = static_cast<int128>(c) - sx;
  if (!FitsInt64(target)) return Overflow();
  State s;
  s.target = static_cast<int64_t>(target);
  const int64_t share = CeilDiv(s.target, static_cast<int64_t>(x.size()));
  s.z.resize(x.size());
  for (size_t i = 0; i < x.size(); ++i) {
    s.z[i] = std::max(share, -x[i]);
    if (s.z[i] == kMin) return Overflow();
    s.t = std::max<int64_t>(s.t, s.z[i] < 0 ? -s.z[i] : s.z[i]);
  }
  ASSIGN_OR_RETURN(s.sum, Sum(s.z));
  return s;
}

// Lowers z[i] by up to the current excess without crossing -x_i or -t.
void Reduce(State& s, absl::Span<const int64_t> x, size_t i) {
  const int128 excess = static_cast<int128>(s.sum) - s.target;
  const int128 lowered = static_cast<int128>(s.z[i]) - excess;
  const int64_t floor = std::max(-x[i], -s.t);
  const int64_t next =
      lowered > floor ? static_cast<int64_t>(lowered) : floor;
  s.sum -= s.z[i] - next;
  s.z[i] = next;
}

absl::StatusOr<OptSolution> Finish(absl::Span<const int64_t> x,
                                   const State& s) {
  OptSolution out;
  out.y.resize(x.size());
  for (size_t i = 0; i < x.size(); ++i) {
    out.y[i] = x[i] + s.z[i];
    out.distance = std::max<int64_t>(out.distance,
                                     s.z[i] < 0 ? -s.z[i] : s.z[i]);
  }
  return out;
}

absl::StatusOr<OptSolution> SingleEntry(absl::Span<const int64_t> x,
                                        int64_t c) {
  const int128 diff = static_cast<int128>(c) - x[0];
  if (!FitsInt64(diff) || diff == kMin) return Overflow();
  const int64_t d = static_cast<int64_t>(diff);
  return OptSolution{{c}, d < 0 ? -d : d};
}

}  // namespace

std::string_view OrderKindName(OrderKind kind) {
  switch (kind) {
    case OrderKind::kAscending:
      return "asc";
    case OrderKind::kDescending:
      return "desc";
    case OrderKind::kRandom:
      return "random";
  }
  return "?";
}

absl::StatusOr<OrderKind> ParseOrderKind(std::string_view name) {
  if (name == "asc" || name == "ascending") return OrderKind::kAscending;
  if (name == "desc" || name == "descending") return OrderKind::kDescending;
  if (name == "random") return OrderKind::kRandom;
  return absl::InvalidArgumentError(
      absl::StrCat("unknown reduction order '", std::string(name), "'"));
}

absl::StatusOr<int64_t> ChebyshevLowerBound(absl::Span<const int64_t> x,
                                            int64_t c) {
  RETURN_IF_ERROR(Validate(x, c));
  ASSIGN_OR_RETURN(const int64_t sx, Sum(x));
  const int128 gap = static_cast<int128>(c) - sx;
  if (!FitsInt64(gap)) return Overflow();
  const int64_t abs_gap = static_cast<int64_t>(gap < 0 ? -gap : gap);
  const int64_t spread = CeilDiv(abs_gap, static_cast<int64_t>(x.size()));
  const int64_t neg = -*std::min_element(x.begin(), x.end());
  return std::max<int64_t>({spread, neg, 0});
}

absl::StatusOr<std::vector<int64_t>> InitialOffset(
    absl::Span<const int64_t> x, int64_t c) {
  ASSIGN_OR_RETURN(State s, Initialize(x, c));
  return std::move(s.z);
}

std::vector<size_t> MakeReductionOrder(absl::Span<const int64_t> x,
                                       const ReductionOrder& order) {
  std::vector<size_t> idx(x.size());
  std::iota(idx.begin(), idx.end(), size_t{0});
  switch (order.kind) {
    case OrderKind::kAscending:
      std::stable_sort(idx.begin(), idx.end(),
                       [&](size_t a, size_t b) { return x[a] < x[b]; });
      break;
    case OrderKind::kDescending:
      std::stable_sort(idx.begin(), idx.end(),
                       [&](size_t a, size_t b) { return x[a] > x[b]; });
      break;
    case OrderKind::kRandom: {
      RandomStream rng(order.seed,
                       {static_cast<uint64_t>(StreamTag::kPermutation)});
      for (size_t i = idx.size(); i > 1; --i) {
        std::swap(idx[i - 1], idx[rng.UniformBelow(uint64_t{i})]);
      }
      break;
    }
  }
  return idx;
}

absl::StatusOr<OptSolution> IntOptSimple(const OptProblem& problem) {
  const absl::Span<const int64_t> x = problem.x;
  RETURN_IF_ERROR(Validate(x, problem.c));
  if (x.size() == 1) return SingleEntry(x, problem.c);
  ASSIGN_OR_RETURN(State s, Initialize(x, problem.c));
  const std::vector<size_t> order = MakeReductionOrder(x, problem.order);
  size_t j = 0;
  while (s.sum > s.target) {
    Reduce(s, x, order[j]);
    j = (j + 1) % order.size();
    if (j == 0) {
      if (s.t == kMax) return Overflow();
      ++s.t;
    }
  }
  return Finish(x, s);
}

absl::StatusOr<OptSolution> IntOptFast(absl::Span<const int64_t> x, int64_t c,
                                       const ReductionOrder& order) {
  RETURN_IF_ERROR(Validate(x, c));
  if (x.size() == 1) return SingleEntry(x, c);
  ASSIGN_OR_RETURN(State s, Initialize(x, c));

  std::vector<size_t> active = MakeReductionOrder(x, order);
  auto reducible = [&](size_t i) { return s.z[i] > -x[i]; };
  std::erase_if(active, [&](size_t i) { return !reducible(i); });

  size_t j = 0;
  while (s.sum > s.target) {
    Reduce(s, x, active[j]);
    j = (j + 1) % active.size();
    if (j != 0) continue;
    std::erase_if(active, [&](size_t i) { return !reducible(i); });
    if (s.sum <= s.target) break;
    // Every remaining entry sits at -t; lowering all of them by `step`
    // removes at most the current excess, so the skipped passes of the
    // reference solver would not have terminated either.
    const int64_t excess = s.sum - s.target;
    const int64_t step =
        std::max<int64_t>(1, excess / static_cast<int64_t>(active.size()));
    if (__builtin_add_overflow(s.t, step, &s.t)) return Overflow();
  }
  return Finish(x, s);
}

absl::StatusOr<OptSolution> IntOptFast(const OptProblem& problem) {
  return IntOptFast(problem.x, problem.c, problem.order);
}

}  // namespace topdown
