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

#include "royalty/synthetic.h"

#include <algorithm>
#include <cmath>

#include "gtest/gtest.h"
#include "royalty/error.h"

namespace royalty {
namespace {

TEST(SyntheticTest, ScenarioNames) {
  for (Scenario s : {Scenario::kRanking, Scenario::kIrrelevant, Scenario::kDuplicate}) {
    EXPECT_EQ(ParseScenario(ScenarioName(s)), s);
  }
  EXPECT_THROW(ParseScenario("nope"), Error);
}

TEST(SyntheticTest, RankingGeometry) {
  const auto setup = MakeSetup(Scenario::kRanking, 1, 30);
  ASSERT_EQ(setup.partition.size(), 4u);
  for (int i = 0; i < 4; ++i) {
    EXPECT_EQ(setup.partition[i].points.size(), 30u);
    EXPECT_NEAR((setup.owner_centers[i] - setup.target_center).norm(), kRankingOffsets[i],
                1e-12);
  }
  EXPECT_NEAR(setup.target_center(0), kDomainCenterX, 1e-12);
}

TEST(SyntheticTest, IrrelevantTargetsFarFromEveryCluster) {
  const auto setup = MakeSetup(Scenario::kIrrelevant, 2);
  for (int k = 0; k < 100; ++k) {
    const auto event = SampleTarget(setup, 3, k);
    for (const Point& c : setup.owner_centers) {
      EXPECT_GE((event.x - c).norm(), 10.0 * kClusterStdDev);
    }
  }
}

TEST(SyntheticTest, DuplicateOwnersIdentical) {
  const auto setup = MakeSetup(Scenario::kDuplicate, 4);
  ASSERT_GE(setup.partition.size(), 2u);
  EXPECT_EQ(setup.partition[0].points, setup.partition[1].points);
}

TEST(SyntheticTest, Deterministic) {
  const auto a = MakeSetup(Scenario::kRanking, 9);
  const auto b = MakeSetup(Scenario::kRanking, 9);
  EXPECT_EQ(a.partition[3].points, b.partition[3].points);
  EXPECT_EQ(SampleTarget(a, 1, 5).x, SampleTarget(b, 1, 5).x);
}

TEST(SyntheticTest, TransactionsCarryValidShares) {
  const auto txs = MakeSyntheticTransactions(100, {0.7, 0.3}, 2.0, 0.5, 8);
  ASSERT_EQ(txs.size(), 100u);
  for (const auto& tx : txs) {
    EXPECT_EQ(tx.price, 2.0);
    ASSERT_TRUE(tx.srs.has_value());
    double sum = 0.0;
    for (double s : tx.srs->shares) {
      EXPECT_GE(s, 0.0);
      sum += s;
    }
    EXPECT_NEAR(sum, 1.0, 1e-12);
  }
}

}  // namespace
}  // namespace royalty
