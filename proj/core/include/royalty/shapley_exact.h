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

#ifndef ROYALTY_SHAPLEY_EXACT_H_
#define ROYALTY_SHAPLEY_EXACT_H_

#include <string_view>
#include <vector>

#include "royalty/game.h"

namespace royalty {

enum class ShapleyMethod { kStratified, kPermutation, kEstimated };

std::string_view ShapleyMethodName(ShapleyMethod method);

// Per-player Shapley values in nats, one entry per player of the game.
struct ShapleyVector {
  std::vector<double> values;
  ShapleyMethod method = ShapleyMethod::kStratified;
};

// Leave-one-out scores v(N) - v(N \ {i}).
struct LooVector {
  std::vector<double> values;
};

struct ExactOptions {
  // Largest player count accepted by the stratified solver.
  int exact_limit = 20;
  int workers = 1;
};

// Stratified Shapley formula: for each player and each coalition size k-1,
// the mean marginal contribution over all subsets of that size not
// containing the player, then the mean over the n strata. Each coalition is
// evaluated once through the game cache. Throws TooManyPlayers when n
// exceeds options.exact_limit.
ShapleyVector ExactShapley(const CoalitionGame& game,
                           const ExactOptions& options = {});

// Brute-force average of marginal contributions over all n! orderings.
// Independent cross-check of ExactShapley; n <= 10.
ShapleyVector ExactShapleyByPermutations(const CoalitionGame& game);

inline constexpr int kPermutationEnumerationLimit = 10;

// Evaluates exactly n + 1 coalitions.
LooVector LooScores(const CoalitionGame& game);

}  // namespace royalty

#endif  // ROYALTY_SHAPLEY_EXACT_H_
