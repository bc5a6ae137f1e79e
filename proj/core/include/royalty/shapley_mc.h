// Copyright 2026 The Royalty Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ROYALTY_SHAPLEY_MC_H_
#define ROYALTY_SHAPLEY_MC_H_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "royalty/error.h"
#include "royalty/game.h"
#include "royalty/shapley_exact.h"

namespace royalty {

inline constexpr int kDefaultPermutations = 2000;

struct EstimatorConfig {
  int num_permutations = kDefaultPermutations;
  std::uint64_t seed = 0;
  // Stop a walk once |v(N) - v(prefix)| <= tolerance. Zero disables.
  double truncation_tolerance = 0.0;
  // Execution only; estimates do not depend on it.
  int workers = 1;

  // Throws InvalidArgument on out-of-range fields.
  void Validate() const;
};

struct EstimateReport {
  ShapleyVector estimate;  // method == kEstimated
  // Sample standard deviation (m - 1 denominator) over sqrt(m); zero when
  // only one permutation was drawn.
  std::vector<double> std_errors;
  int permutations_used = 0;
  // Utility reads issued by the walks (cache hits included), plus one read
  // of v(N) when truncation is enabled.
  std::int64_t oracle_calls = 0;
};

// The `index`-th uniformly random ordering of [0, n) for `seed`. A pure
// function of its arguments, so permutations can be drawn in any order.
std::vector<PlayerId> DrawOrdering(int n, std::uint64_t seed,
                                   std::int64_t index);

struct WalkResult {
  std::vector<double> marginals;  // indexed by player
  int oracle_calls = 0;           // prefix evaluations, v(empty) included
  int players_walked = 0;         // n unless the walk truncated
};

// Walks `ordering` from the empty coalition, recording
// v(prefix + i) - v(prefix) for each player i. With tolerance > 0 the walk
// stops once the prefix value is within tolerance of `grand_value` and the
// remaining players get exactly 0. With tolerance == 0 it never truncates.
WalkResult TruncatedWalk(const CoalitionGame& game,
                         std::span<const PlayerId> ordering, double tolerance,
                         double grand_value);

// Permutation-sampling Shapley estimator. The result is a pure function of
// (game, cfg) minus cfg.workers.
EstimateReport PermutationSample(const CoalitionGame& game,
                                 const EstimatorConfig& cfg);

// Chain of models grown one owner at a time: start() is the model for the
// empty coalition, extend(state, i) adds owner i, utility_of reads v.
template <typename State>
struct IncrementalOracle {
  std::function<State()> start;
  std::function<State(const State&, PlayerId)> extend;
  std::function<double(const State&)> utility_of;
};

namespace internal {

// Fills `marginals` (size n) for permutation `index` and returns the number
// of utility reads it made.
using PermutationKernel =
    std::function<std::int64_t(std::int64_t index, std::span<double>)>;

// Runs `kernel` for every permutation and reduces the marginals in fixed
// block order into mean / standard error.
EstimateReport ReducePermutations(int n, const EstimatorConfig& cfg,
                                  const PermutationKernel& kernel);

}  // namespace internal

// Same estimator as PermutationSample, but each permutation costs n extend
// steps and n + 1 utility reads along one amortized chain. Orderings match
// PermutationSample for the same seed. Truncation is not supported here
// (the chain never sees v(N) up front); a nonzero tolerance is rejected.
template <typename State>
EstimateReport PermutationSampleIncremental(const IncrementalOracle<State>& inc,
                                            int n, const EstimatorConfig& cfg) {
  cfg.Validate();
  if (cfg.truncation_tolerance != 0.0) {
    throw Error(ErrorCode::kInvalidArgument,
                "incremental sampling does not support truncation");
  }
  if (n < 0 || n > kMaxPlayers) {
    throw Error(ErrorCode::kTooManyPlayers,
                "player count " + std::to_string(n) + " outside [0, 64]");
  }
  return internal::ReducePermutations(
      n, cfg, [&](std::int64_t index, std::span<double> marginals) {
        const std::vector<PlayerId> order = DrawOrdering(n, cfg.seed, index);
        State state = inc.start();
        double previous = inc.utility_of(state);
        for (const PlayerId i : order) {
          state = inc.extend(state, i);
          const double current = inc.utility_of(state);
          marginals[static_cast<std::size_t>(i)] = current - previous;
          previous = current;
        }
        return static_cast<std::int64_t>(n) + 1;
      });
}

}  // namespace royalty

#endif  // ROYALTY_SHAPLEY_MC_H_
