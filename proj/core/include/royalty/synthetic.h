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

#ifndef ROYALTY_SYNTHETIC_H_
#define ROYALTY_SYNTHETIC_H_

#include <cstdint>
#include <string_view>
#include <vector>

#include "royalty/dataset.h"
#include "royalty/ledger.h"

namespace royalty {

// Synthetic Gaussian-cluster owners in 2-D.
//
// All scenarios place the owners' data in a region centred at
// kDomainCenter, far from the default N(0, I) public-domain baseline, the
// way fine-tuning data sits far from what a base model already covers.
// Clusters have unit standard deviation.
inline constexpr double kDomainCenterX = 30.0;
inline constexpr double kClusterStdDev = 1.0;

enum class Scenario {
  // Owner i's cluster sits kRankingOffsets[i] away from the target cluster
  // (owner 0 is centred on it); targets come from the target cluster.
  kRanking,
  // Owners sit on a ring of radius kIrrelevantRadius around an unseen
  // cluster; targets come from the unseen cluster.
  kIrrelevant,
  // Two owners holding bit-identical data.
  kDuplicate,
};

inline constexpr double kRankingOffsets[4] = {0.0, 5.0, 10.0, 15.0};
inline constexpr double kIrrelevantRadius = 14.0;

std::string_view ScenarioName(Scenario scenario);
// Throws InvalidArgument for unknown names.
Scenario ParseScenario(std::string_view name);

struct SyntheticSetup {
  Scenario scenario = Scenario::kRanking;
  Partition partition;
  std::vector<Point> owner_centers;
  Point target_center;
};

SyntheticSetup MakeSetup(Scenario scenario, std::uint64_t seed,
                         int points_per_owner = 50);

// A target drawn around setup.target_center with unit spread, truncated at
// radius 2 so irrelevant targets stay at least 12 standard deviations from
// every owner cluster.
GenerationEvent SampleTarget(const SyntheticSetup& setup, std::uint64_t seed,
                             std::int64_t index);

// `count` transactions at a constant price, each carrying a share vector
// with mean proportions `mean_shares` and independent multiplicative noise
// of relative size `jitter`. Events are left empty.
std::vector<Transaction> MakeSyntheticTransactions(
    std::int64_t count, const std::vector<double>& mean_shares, double price,
    double jitter, std::uint64_t seed);

}  // namespace royalty

#endif  // ROYALTY_SYNTHETIC_H_
