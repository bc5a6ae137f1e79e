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

#include "royalty/shapley_mc.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "royalty/random.h"

namespace royalty {
namespace {

// Permutations per reduction block. Blocks are merged in index order, which
// fixes the floating-point summation order independently of threading.
constexpr std::int64_t kBlockSize = 64;

// Running mean / sum of squared deviations (Welford), mergeable (Chan).
struct Moments {
  double count = 0.0;
  double mean = 0.0;
  double m2 = 0.0;

  void Add(double x) {
    count += 1.0;
    const double delta = x - mean;
    mean += delta / count;
    m2 += delta * (x - mean);
  }

  void Merge(const Moments& other) {
    if (other.count == 0.0) return;
    if (count == 0.0) {
      *this = other;
      return;
    }
    const double total = count + other.count;
    const double delta = other.mean - mean;
    mean += delta * other.count / total;
    m2 += other.m2 + delta * delta * count * other.count / total;
    count = total;
  }
};

}  // namespace

void EstimatorConfig::Validate() const {
  if (num_permutations < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "num_permutations must be >= 1, got " +
                    std::to_string(num_permutations));
  }
  if (!(truncation_tolerance >= 0.0) || !std::isfinite(truncation_tolerance)) {
    throw Error(ErrorCode::kInvalidArgument,
                "truncation_tolerance must be finite and >= 0");
  }
}

std::vector<PlayerId> DrawOrdering(int n, std::uint64_t seed,
                                   std::int64_t index) {
  std::vector<PlayerId> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  Rng rng(DeriveSeed(seed, static_cast<std::uint64_t>(index)));
  rng.Shuffle(std::span<PlayerId>(order));
  return order;
}

WalkResult TruncatedWalk(const CoalitionGame& game,
                         std::span<const PlayerId> ordering, double tolerance,
                         double grand_value) {
  const int n = game.n();
  if (static_cast<int>(ordering.size()) != n) {
    throw Error(ErrorCode::kInvalidArgument,
                "ordering length does not match player count");
  }
  if (!(tolerance >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "tolerance must be >= 0");
  }
  WalkResult walk;
  walk.marginals.assign(static_cast<std::size_t>(n), 0.0);
  Coalition prefix;
  double previous = game.Evaluate(prefix);
  walk.oracle_calls = 1;
  for (const PlayerId i : ordering) {
    if (tolerance > 0.0 && std::abs(grand_value - previous) <= tolerance) {
      break;
    }
    prefix = prefix.With(i);
    const double current = game.Evaluate(prefix);
    ++walk.oracle_calls;
    walk.marginals[static_cast<std::size_t>(i)] = current - previous;
    previous = current;
    ++walk.players_walked;
  }
  return walk;
}

EstimateReport PermutationSample(const CoalitionGame& game,
                                 const EstimatorConfig& cfg) {
  cfg.Validate();
  const int n = game.n();
  const bool truncating = cfg.truncation_tolerance > 0.0;
  const double grand =
      truncating ? game.Evaluate(Coalition::Grand(n)) : 0.0;
  EstimateReport report = internal::ReducePermutations(
      n, cfg, [&](std::int64_t index, std::span<double> marginals) {
        const std::vector<PlayerId> order = DrawOrdering(n, cfg.seed, index);
        WalkResult walk =
            TruncatedWalk(game, order, cfg.truncation_tolerance, grand);
        std::copy(walk.marginals.begin(), walk.marginals.end(),
                  marginals.begin());
        return static_cast<std::int64_t>(walk.oracle_calls);
      });
  if (truncating) ++report.oracle_calls;
  return report;
}

namespace internal {

EstimateReport ReducePermutations(int n, const EstimatorConfig& cfg,
                                  const PermutationKernel& kernel) {
  const std::int64_t m = cfg.num_permutations;
  const std::int64_t blocks = (m + kBlockSize - 1) / kBlockSize;
  const auto width = static_cast<std::size_t>(n);

  std::vector<std::vector<Moments>> block_moments(
      static_cast<std::size_t>(blocks), std::vector<Moments>(width));
  std::vector<std::int64_t> block_calls(static_cast<std::size_t>(blocks), 0);

  ParallelFor(blocks, cfg.workers, [&](std::int64_t b) {
    auto& moments = block_moments[static_cast<std::size_t>(b)];
    std::vector<double> marginals(width);
    const std::int64_t end = std::min(m, (b + 1) * kBlockSize);
    for (std::int64_t p = b * kBlockSize; p < end; ++p) {
      std::fill(marginals.begin(), marginals.end(), 0.0);
      block_calls[static_cast<std::size_t>(b)] +=
          kernel(p, std::span<double>(marginals));
      for (std::size_t i = 0; i < width; ++i) moments[i].Add(marginals[i]);
    }
  });

  std::vector<Moments> total(width);
  EstimateReport report;
  for (std::int64_t b = 0; b < blocks; ++b) {
    for (std::size_t i = 0; i < width; ++i) {
      total[i].Merge(block_moments[static_cast<std::size_t>(b)][i]);
    }
    report.oracle_calls += block_calls[static_cast<std::size_t>(b)];
  }

  report.estimate.method = ShapleyMethod::kEstimated;
  report.estimate.values.resize(width);
  report.std_errors.resize(width);
  const double count = static_cast<double>(m);
  for (std::size_t i = 0; i < width; ++i) {
    report.estimate.values[i] = total[i].mean;
    report.std_errors[i] =
        m > 1 ? std::sqrt(std::max(0.0, total[i].m2 / (count - 1.0)) / count)
              : 0.0;
  }
  report.permutations_used = static_cast<int>(m);
  return report;
}

}  // namespace internal
}  // namespace royalty
