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

#include "royalty/shapley_exact.h"

#include <algorithm>
#include <numeric>
#include <string>

#include "royalty/error.h"
#include "royalty/numeric.h"

namespace royalty {

std::string_view ShapleyMethodName(ShapleyMethod method) {
  switch (method) {
    case ShapleyMethod::kStratified:
      return "stratified";
    case ShapleyMethod::kPermutation:
      return "permutation";
    case ShapleyMethod::kEstimated:
      return "estimated";
  }
  return "unknown";
}

ShapleyVector ExactShapley(const CoalitionGame& game,
                           const ExactOptions& options) {
  const int n = game.n();
  if (n > options.exact_limit) {
    throw Error(ErrorCode::kTooManyPlayers,
                "exact solver limited to " +
                    std::to_string(options.exact_limit) + " players, got " +
                    std::to_string(n));
  }
  ShapleyVector result{std::vector<double>(static_cast<std::size_t>(n), 0.0),
                       ShapleyMethod::kStratified};
  if (n == 0) return result;

  const std::vector<double> table = TabulateUtilities(game, options.workers);

  ParallelFor(n, options.workers, [&](std::int64_t player) {
    const PlayerId i = static_cast<PlayerId>(player);
    CompensatedSum strata;
    for (int k = 1; k <= n; ++k) {
      CompensatedSum stratum;
      for (const Coalition s : SubsetsExcluding(n, i, k - 1)) {
        stratum.Add(table[s.With(i).bits()] - table[s.bits()]);
      }
      strata.Add(stratum.value() /
                 static_cast<double>(Binomial(n - 1, k - 1)));
    }
    result.values[static_cast<std::size_t>(i)] =
        strata.value() / static_cast<double>(n);
  });
  return result;
}

ShapleyVector ExactShapleyByPermutations(const CoalitionGame& game) {
  const int n = game.n();
  if (n > kPermutationEnumerationLimit) {
    throw Error(ErrorCode::kTooManyPlayers,
                "permutation enumeration limited to " +
                    std::to_string(kPermutationEnumerationLimit) +
                    " players, got " + std::to_string(n));
  }
  ShapleyVector result{std::vector<double>(static_cast<std::size_t>(n), 0.0),
                       ShapleyMethod::kPermutation};
  if (n == 0) return result;

  // Read coalition values straight from the game, one per prefix, so this
  // route shares nothing with ExactShapley beyond the oracle.
  std::vector<CompensatedSum> sums(static_cast<std::size_t>(n));
  std::vector<PlayerId> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  double orderings = 0.0;
  do {
    Coalition prefix;
    double previous = game.Evaluate(prefix);
    for (const PlayerId i : order) {
      prefix = prefix.With(i);
      const double current = game.Evaluate(prefix);
      sums[static_cast<std::size_t>(i)].Add(current - previous);
      previous = current;
    }
    orderings += 1.0;
  } while (std::next_permutation(order.begin(), order.end()));

  for (int i = 0; i < n; ++i) {
    result.values[static_cast<std::size_t>(i)] =
        sums[static_cast<std::size_t>(i)].value() / orderings;
  }
  return result;
}

LooVector LooScores(const CoalitionGame& game) {
  const int n = game.n();
  const Coalition grand = Coalition::Grand(n);
  const double full = game.Evaluate(grand);
  LooVector result{std::vector<double>(static_cast<std::size_t>(n))};
  for (int i = 0; i < n; ++i) {
    result.values[static_cast<std::size_t>(i)] =
        full - game.Evaluate(grand.Without(i));
  }
  return result;
}

}  // namespace royalty
