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

#include "royalty/srs.h"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "gtest/gtest.h"
#include "royalty/error.h"
#include "royalty/numeric.h"
#include "test_support.h"

namespace royalty {
namespace {

using testing::AdditiveTable;
using testing::GloveTable;
using testing::RandomTable;
using testing::TableGame;

ShapleyVector Vec(std::vector<double> v) { return {std::move(v), ShapleyMethod::kStratified}; }

TEST(RelativeUtilityTest, Examples) {
  EXPECT_EQ(RelativeUtility(-3.0, -3.0), 0.0);
  EXPECT_EQ(RelativeUtility(-2.0, -5.0), 3.0);
  EXPECT_NEAR(NatsToBits(3.0), 4.3281, 1e-4);
  EXPECT_DOUBLE_EQ(NatsToBits(std::numbers::ln2), 1.0);
}

TEST(RelativeUtilityTest, RejectsNonFinite) {
  const double inf = std::numeric_limits<double>::infinity();
  try {
    RelativeUtility(std::nan(""), 0.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNonFinite);
  }
  EXPECT_THROW(RelativeUtility(0.0, -inf), Error);
}

TEST(SrsTest, ClampsNegatives) {
  const auto s = Srs(Vec({2.0, -1.0, 3.0}));
  EXPECT_FALSE(s.degenerate);
  EXPECT_DOUBLE_EQ(s.shares[0], 0.4);
  EXPECT_EQ(s.shares[1], 0.0);
  EXPECT_DOUBLE_EQ(s.shares[2], 0.6);
}

TEST(SrsTest, AllZeroIsDegenerateUniform) {
  const auto s = Srs(Vec({0.0, 0.0, 0.0}));
  EXPECT_TRUE(s.degenerate);
  for (double x : s.shares) EXPECT_DOUBLE_EQ(x, 1.0 / 3.0);
}

TEST(SrsTest, AllNegativeIsDegenerate) {
  const auto s = Srs(Vec({-1.0, -0.5}));
  EXPECT_TRUE(s.degenerate);
  EXPECT_EQ(s.shares, (std::vector<double>{0.5, 0.5}));
}

TEST(SrsTest, SingleOwner) {
  const auto s = Srs(Vec({5.0}));
  EXPECT_EQ(s.shares, std::vector<double>{1.0});
  EXPECT_FALSE(s.degenerate);
}

TEST(SrsTest, RejectsNonFinite) {
  EXPECT_THROW(Srs(Vec({1.0, std::nan("")})), Error);
}

TEST(SrsTest, SimplexClampAndScaleProperties) {
  std::mt19937_64 gen(12);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> phi(1 + trial % 9);
    for (double& p : phi) p = u(gen);
    const auto s = Srs(Vec(phi));
    if (s.degenerate) {
      for (double x : s.shares) EXPECT_EQ(x, 1.0 / phi.size());
      continue;
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < phi.size(); ++i) {
      EXPECT_GE(s.shares[i], 0.0);
      EXPECT_LE(s.shares[i], 1.0);
      if (phi[i] <= 0.0) EXPECT_EQ(s.shares[i], 0.0);
      sum += s.shares[i];
    }
    EXPECT_NEAR(sum, 1.0, 1e-12);
    for (double alpha : {0.001, 3.0, 1e6}) {
      std::vector<double> scaled = phi;
      for (double& p : scaled) p *= alpha;
      const auto t = Srs(Vec(scaled));
      for (std::size_t i = 0; i < phi.size(); ++i) {
        EXPECT_NEAR(t.shares[i], s.shares[i], 1e-12);
      }
    }
  }
}

TEST(SrsFromGameTest, GloveExact) {
  const auto r = SrsFromGame(*TableGame(GloveTable()), SolverSpec::Exact());
  EXPECT_EQ(r.attribution.solver, "exact");
  EXPECT_FALSE(r.attribution.std_errors.has_value());
  EXPECT_NEAR(r.srs.shares[0], 1.0 / 6.0, 1e-12);
  EXPECT_NEAR(r.srs.shares[1], 1.0 / 6.0, 1e-12);
  EXPECT_NEAR(r.srs.shares[2], 2.0 / 3.0, 1e-12);
}

TEST(SrsFromGameTest, AdditiveExact) {
  const auto r = SrsFromGame(*TableGame(AdditiveTable({2.0, 3.0})), SolverSpec::Exact());
  EXPECT_DOUBLE_EQ(r.srs.shares[0], 0.4);
  EXPECT_DOUBLE_EQ(r.srs.shares[1], 0.6);
}

TEST(SrsFromGameTest, GloveMonteCarlo) {
  EstimatorConfig cfg;
  cfg.num_permutations = 10000;
  cfg.seed = 17;
  const auto r = SrsFromGame(*TableGame(GloveTable()), SolverSpec::MonteCarlo(cfg));
  EXPECT_EQ(r.attribution.solver, "mc");
  ASSERT_TRUE(r.attribution.std_errors.has_value());
  EXPECT_NEAR(r.srs.shares[0], 1.0 / 6.0, 0.03);
  EXPECT_NEAR(r.srs.shares[1], 1.0 / 6.0, 0.03);
  EXPECT_NEAR(r.srs.shares[2], 2.0 / 3.0, 0.03);
}

// Absolute utilities differ from relative ones by the baseline constant.
TEST(SrsFromGameTest, AbsoluteAndRelativeAgree) {
  std::mt19937_64 gen(13);
  for (int n = 2; n <= 7; ++n) {
    const auto relative = RandomTable(n, gen);
    auto absolute = relative;
    for (double& v : absolute) v -= 41.75;
    const auto a = SrsFromGame(*TableGame(relative), SolverSpec::Exact());
    const auto b = SrsFromGame(*TableGame(absolute), SolverSpec::Exact());
    ASSERT_EQ(a.srs.degenerate, b.srs.degenerate);
    for (int i = 0; i < n; ++i) EXPECT_NEAR(a.srs.shares[i], b.srs.shares[i], 1e-12);
  }
}

}  // namespace
}  // namespace royalty
