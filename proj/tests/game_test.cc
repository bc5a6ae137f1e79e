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

#include "royalty/game.h"

#include <atomic>
#include <thread>
#include <vector>

#include "gtest/gtest.h"
#include "royalty/error.h"
#include "royalty/shapley_exact.h"
#include "royalty/shapley_mc.h"
#include "test_support.h"

namespace royalty {
namespace {

using testing::RandomTable;
using testing::TableGame;

TEST(CoalitionGameTest, AdditiveEvaluate) {
  CoalitionGame game(4, [](Coalition s) { return double(s.size()); });
  const std::vector<int> m = {0, 1};
  EXPECT_EQ(game.Evaluate(Coalition::FromMembers(m, 4)), 2.0);
}

TEST(CoalitionGameTest, SecondCallHitsCache) {
  std::atomic<int> calls{0};
  CoalitionGame game(3, [&](Coalition s) {
    ++calls;
    return 0.5 * s.size();
  });
  const Coalition s(0b101);
  const double first = game.Evaluate(s);
  EXPECT_EQ(game.eval_count(), 1);
  const double second = game.Evaluate(s);
  EXPECT_EQ(first, second);
  EXPECT_EQ(game.eval_count(), 1);
  EXPECT_EQ(calls.load(), 1);
}

TEST(CoalitionGameTest, DisabledCacheReinvokesOracle) {
  std::atomic<int> calls{0};
  CoalitionGame game(
      2, [&](Coalition) { return double(++calls); }, CacheMode::kDisabled);
  game.Evaluate(Coalition(1));
  game.Evaluate(Coalition(1));
  EXPECT_EQ(calls.load(), 2);
  EXPECT_EQ(game.oracle_calls(), 2);
}

TEST(CoalitionGameTest, RejectsForeignPlayers) {
  CoalitionGame game(2, [](Coalition) { return 0.0; });
  try {
    game.Evaluate(Coalition(0b100));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIndexOutOfRange);
  }
}

TEST(CoalitionGameTest, OracleFailurePropagates) {
  CoalitionGame game(2, [](Coalition s) -> double {
    if (s.size() == 2) throw Error(ErrorCode::kOracleFailure, "bad fit");
    return 0.0;
  });
  EXPECT_NO_THROW(game.Evaluate(Coalition(1)));
  try {
    game.Evaluate(Coalition(3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kOracleFailure);
  }
  EXPECT_EQ(game.eval_count(), 1);
}

TEST(CoalitionGameTest, EvalCountBoundedByPowerSet) {
  std::mt19937_64 gen(3);
  const auto game = TableGame(RandomTable(5, gen));
  for (int round = 0; round < 3; ++round) {
    for (std::uint64_t bits = 0; bits < 32; ++bits) game->Evaluate(Coalition(bits));
  }
  EXPECT_EQ(game->eval_count(), 32);
}

TEST(CoalitionGameTest, ConcurrentEvaluationStoresOneValue) {
  std::atomic<int> calls{0};
  CoalitionGame game(10, [&](Coalition s) {
    ++calls;
    return static_cast<double>(s.bits()) * 0.25;
  });
  std::vector<std::thread> threads;
  for (int t = 0; t < 4; ++t) {
    threads.emplace_back([&] {
      for (std::uint64_t bits = 0; bits < 1024; ++bits) {
        EXPECT_EQ(game.Evaluate(Coalition(bits)), bits * 0.25);
      }
    });
  }
  for (auto& th : threads) th.join();
  EXPECT_EQ(game.eval_count(), 1024);
  EXPECT_GE(calls.load(), 1024);
}

TEST(CoalitionGameTest, IdenticalOraclesGiveIdenticalCaches) {
  std::mt19937_64 gen(11);
  const auto table = RandomTable(6, gen);
  const auto a = TableGame(table);
  const auto b = TableGame(table);
  for (std::uint64_t bits = 0; bits < 64; ++bits) {
    EXPECT_EQ(a->Evaluate(Coalition(bits)), b->Evaluate(Coalition(bits)));
  }
}

TEST(TabulateUtilitiesTest, IndependentOfWorkers) {
  std::mt19937_64 gen(5);
  const auto table = RandomTable(7, gen);
  const auto g1 = TableGame(table);
  const auto g4 = TableGame(table);
  EXPECT_EQ(TabulateUtilities(*g1, 1), table);
  EXPECT_EQ(TabulateUtilities(*g4, 4), table);
}

TEST(ParallelForTest, VisitsEachIndexOnce) {
  std::vector<std::atomic<int>> hits(1000);
  ParallelFor(1000, 3, [&](std::int64_t i) { ++hits[i]; });
  for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
}

TEST(ParallelForTest, RethrowsTaskException) {
  EXPECT_THROW(ParallelFor(100, 2,
                           [](std::int64_t i) {
                             if (i == 57) throw Error(ErrorCode::kOracleFailure, "x");
                           }),
               Error);
}

// Solvers give bit-identical results with and without memoization.
TEST(MemoizationTest, SolversTransparentToCache) {
  std::mt19937_64 gen(19);
  for (int n = 1; n <= 7; ++n) {
    const auto table = RandomTable(n, gen);
    const auto cached = TableGame(table);
    const auto uncached = TableGame(table, CacheMode::kDisabled);
    EXPECT_EQ(ExactShapley(*cached).values, ExactShapley(*uncached).values);
    EXPECT_EQ(ExactShapleyByPermutations(*cached).values,
              ExactShapleyByPermutations(*uncached).values);
    EXPECT_EQ(LooScores(*cached).values, LooScores(*uncached).values);
    EstimatorConfig cfg;
    cfg.num_permutations = 300;
    cfg.seed = 77;
    const auto a = PermutationSample(*cached, cfg);
    const auto b = PermutationSample(*uncached, cfg);
    EXPECT_EQ(a.estimate.values, b.estimate.values);
    EXPECT_EQ(a.std_errors, b.std_errors);
  }
}

}  // namespace
}  // namespace royalty
