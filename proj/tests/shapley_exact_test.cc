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
#include <cmath>
#include <random>
#include <vector>

#include "gtest/gtest.h"
#include "royalty/error.h"
#include "test_support.h"

namespace royalty {
namespace {

using testing::AdditiveTable;
using testing::DuplicationTable;
using testing::GloveTable;
using testing::RandomTable;
using testing::ReferenceShapley;
using testing::Table;
using testing::TableGame;

std::vector<double> Phi(const Table& t) { return ExactShapley(*TableGame(t)).values; }

TEST(ExactShapleyTest, SymmetricPair) {
  const auto phi = Phi({0.0, 1.0, 1.0, 2.0});
  EXPECT_DOUBLE_EQ(phi[0], 1.0);
  EXPECT_DOUBLE_EQ(phi[1], 1.0);
}

TEST(ExactShapleyTest, GloveGame) {
  const auto result = ExactShapley(*TableGame(GloveTable()));
  EXPECT_EQ(result.method, ShapleyMethod::kStratified);
  const auto ref = ReferenceShapley(GloveTable());
  EXPECT_NEAR(ref[0], 1.0 / 6.0, 1e-15);
  EXPECT_NEAR(ref[2], 2.0 / 3.0, 1e-15);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(result.values[i], ref[i], 1e-12);
}

TEST(ExactShapleyTest, DummyPlayerGetsItsConstant) {
  std::mt19937_64 gen(1);
  Table base = RandomTable(2, gen);
  Table t(8);
  for (std::size_t bits = 0; bits < 4; ++bits) {
    t[bits] = base[bits];
    t[bits | 4u] = base[bits] + 0.5;
  }
  EXPECT_NEAR(Phi(t)[2], 0.5, 1e-12);
}

TEST(ExactShapleyTest, EachCoalitionEvaluatedOnce) {
  std::mt19937_64 gen(2);
  const auto game = TableGame(RandomTable(6, gen));
  ExactShapley(*game);
  EXPECT_EQ(game->oracle_calls(), 64);
}

TEST(ExactShapleyTest, TooManyPlayers) {
  CoalitionGame game(21, [](Coalition) { return 0.0; });
  try {
    ExactShapley(game);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTooManyPlayers);
  }
  ExactOptions small;
  small.exact_limit = 3;
  CoalitionGame four(4, [](Coalition) { return 0.0; });
  EXPECT_THROW(ExactShapley(four, small), Error);
}

TEST(ExactShapleyTest, ZeroPlayers) {
  CoalitionGame game(0, [](Coalition) { return 0.0; });
  EXPECT_TRUE(ExactShapley(game).values.empty());
}

TEST(ExactShapleyTest, WorkersDoNotChangeResult) {
  std::mt19937_64 gen(3);
  const auto table = RandomTable(9, gen);
  ExactOptions parallel;
  parallel.workers = 4;
  EXPECT_EQ(ExactShapley(*TableGame(table)).values,
            ExactShapley(*TableGame(table), parallel).values);
}

TEST(PermutationEnumerationTest, GloveGame) {
  const auto result = ExactShapleyByPermutations(*TableGame(GloveTable()));
  EXPECT_EQ(result.method, ShapleyMethod::kPermutation);
  EXPECT_NEAR(result.values[0], 1.0 / 6.0, 1e-12);
  EXPECT_NEAR(result.values[1], 1.0 / 6.0, 1e-12);
  EXPECT_NEAR(result.values[2], 2.0 / 3.0, 1e-12);
}

TEST(PermutationEnumerationTest, SinglePlayer) {
  const auto result = ExactShapleyByPermutations(*TableGame({0.0, 3.25}));
  EXPECT_EQ(result.values, std::vector<double>{3.25});
}

TEST(PermutationEnumerationTest, AdditiveGame) {
  const std::vector<double> w = {0.5, -1.25, 2.0, 4.0};
  const auto result = ExactShapleyByPermutations(*TableGame(AdditiveTable(w)));
  for (int i = 0; i < 4; ++i) EXPECT_DOUBLE_EQ(result.values[i], w[i]);
}

TEST(PermutationEnumerationTest, TooManyPlayers) {
  CoalitionGame game(11, [](Coalition) { return 0.0; });
  EXPECT_THROW(ExactShapleyByPermutations(game), Error);
}

TEST(LooTest, AdditiveWeights) {
  const auto loo = LooScores(*TableGame(AdditiveTable({2.0, 3.0})));
  EXPECT_EQ(loo.values, (std::vector<double>{2.0, 3.0}));
}

TEST(LooTest, DuplicationGivesZero) {
  const auto loo = LooScores(*TableGame(DuplicationTable()));
  EXPECT_EQ(loo.values, (std::vector<double>{0.0, 0.0}));
}

TEST(LooTest, SinglePlayer) {
  EXPECT_EQ(LooScores(*TableGame({0.0, 5.0})).values, std::vector<double>{5.0});
}

TEST(LooTest, UsesNPlusOneEvaluations) {
  std::mt19937_64 gen(4);
  const auto game = TableGame(RandomTable(6, gen));
  LooScores(*game);
  EXPECT_EQ(game->eval_count(), 7);
}

TEST(DuplicationTest, ShapleySplitsWhatLooMisses) {
  const auto game = TableGame(DuplicationTable());
  const auto phi = ExactShapley(*game).values;
  const auto loo = LooScores(*game).values;
  EXPECT_EQ(loo, (std::vector<double>{0.0, 0.0}));
  EXPECT_GT(phi[0], 0.0);
  EXPECT_EQ(phi[0], phi[1]);
  EXPECT_NEAR(phi[0] + phi[1], game->Evaluate(Coalition(3)), 1e-12);
}

// Axiom properties on random games.
class AxiomTest : public ::testing::TestWithParam<int> {};

TEST_P(AxiomTest, EfficiencyAndAgreementWithReference) {
  std::mt19937_64 gen(1000 + GetParam());
  for (int trial = 0; trial < 10; ++trial) {
    const Table t = RandomTable(GetParam(), gen);
    const auto phi = Phi(t);
    double sum = 0.0;
    for (double p : phi) sum += p;
    const double grand = t.back();
    EXPECT_LE(std::abs(sum - grand), 1e-9 * std::max(1.0, std::abs(grand)));
    const auto ref = ReferenceShapley(t);
    const auto perm = ExactShapleyByPermutations(*TableGame(t)).values;
    for (std::size_t i = 0; i < phi.size(); ++i) {
      EXPECT_NEAR(phi[i], ref[i], 1e-12);
      EXPECT_NEAR(phi[i], perm[i], 1e-9);
    }
  }
}

TEST_P(AxiomTest, Symmetry) {
  const int n = GetParam();
  std::mt19937_64 gen(2000 + n);
  Table t = RandomTable(n, gen);
  // Make players 0 and 1 interchangeable.
  for (std::size_t bits = 0; bits < t.size(); ++bits) {
    if ((bits & 3u) == 2u) t[bits] = t[(bits & ~std::size_t{2}) | 1u];
  }
  const auto phi = Phi(t);
  EXPECT_LE(std::abs(phi[0] - phi[1]), 1e-12);
}

TEST_P(AxiomTest, Dummy) {
  const int n = GetParam();
  std::mt19937_64 gen(3000 + n);
  Table t = RandomTable(n, gen);
  const std::size_t dummy = std::size_t{1} << (n - 1);
  for (std::size_t bits = 0; bits < dummy; ++bits) t[bits | dummy] = t[bits] - 0.3;
  EXPECT_NEAR(Phi(t)[n - 1], -0.3, 1e-12);
}

TEST_P(AxiomTest, ShiftInvariance) {
  const int n = GetParam();
  std::mt19937_64 gen(5000 + n);
  const Table t = RandomTable(n, gen);
  Table shifted = t;
  for (double& v : shifted) v += 12.5;
  const auto a = Phi(t), b = Phi(shifted);
  for (int i = 0; i < n; ++i) EXPECT_NEAR(a[i], b[i], 1e-12);
}

INSTANTIATE_TEST_SUITE_P(SmallGames, AxiomTest, ::testing::Range(2, 9));

TEST(LinearityTest, RandomGamesUpToSix) {
  for (int n = 1; n <= 6; ++n) {
    std::mt19937_64 gen(4000 + n);
    const Table v1 = RandomTable(n, gen);
    const Table v2 = RandomTable(n, gen);
    const double a1 = 1.7, a2 = -0.6;
    Table mix(v1.size());
    for (std::size_t k = 0; k < mix.size(); ++k) mix[k] = a1 * v1[k] + a2 * v2[k];
    const auto p1 = Phi(v1), p2 = Phi(v2), pm = Phi(mix);
    for (int i = 0; i < n; ++i) EXPECT_NEAR(pm[i], a1 * p1[i] + a2 * p2[i], 1e-9);
  }
}

}  // namespace
}  // namespace royalty
