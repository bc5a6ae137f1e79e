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

#include "royalty/latent_chain.h"

#include <cmath>
#include <vector>

#include "gtest/gtest.h"
#include "royalty/density.h"
#include "royalty/error.h"
#include "royalty/random.h"

namespace royalty {
namespace {

Point P(std::initializer_list<double> v) {
  Point p(static_cast<Eigen::Index>(v.size()));
  Eigen::Index k = 0;
  for (double x : v) p(k++) = x;
  return p;
}

TEST(NoiseScheduleTest, Validation) {
  EXPECT_NO_THROW(NoiseSchedule::Constant(3, 0.9).Validate());
  EXPECT_NO_THROW(NoiseSchedule{{1.0}}.Validate());
  EXPECT_THROW(NoiseSchedule{{}}.Validate(), Error);
  EXPECT_THROW(NoiseSchedule{{0.0}}.Validate(), Error);
  EXPECT_THROW((NoiseSchedule{{0.5, 1.1}}.Validate()), Error);
  EXPECT_EQ(NoiseSchedule::Constant(4, 0.7).alphas, (std::vector<double>{0.7, 0.7, 0.7, 0.7}));
}

TEST(LatentMcTest, DefaultSampleCount) { EXPECT_EQ(kDefaultLatentSamples, 20); }

TEST(LatentMcTest, ConstantKernelIsExact) {
  ReverseChain chain;
  chain.dimension = 1;
  chain.sample_latents = [](Rng& rng) {
    return std::vector<Point>{P({rng.StandardNormal()})};
  };
  chain.final_kernel_log_density = [](const Point&, const Point&) { return -1.75; };
  for (int k : {1, 7, 20, 500}) {
    const auto est = EstimateLatentLogDensity(chain, P({0.3}), k, 5);
    EXPECT_DOUBLE_EQ(est.log_density, -1.75);
    EXPECT_EQ(est.samples, k);
    EXPECT_NEAR(est.log_std_error, 0.0, 1e-12);
  }
}

TEST(LatentMcTest, StableForExtremeKernelValues) {
  for (double level : {-700.0, 700.0}) {
    ReverseChain chain;
    chain.dimension = 1;
    chain.sample_latents = [](Rng& rng) {
      return std::vector<Point>{P({rng.Uniform01()})};
    };
    chain.final_kernel_log_density = [level](const Point&, const Point& x1) {
      return level + x1(0);
    };
    const auto est = EstimateLatentLogDensity(chain, P({0.0}), 100, 3);
    EXPECT_TRUE(std::isfinite(est.log_density));
    EXPECT_GT(est.log_density, level);
    EXPECT_LT(est.log_density, level + 1.0);
  }
}

TEST(LatentMcTest, RejectsZeroSamples) {
  const auto chain = GaussianDdpmChain(DensityModel::StandardNormal(1),
                                       NoiseSchedule::Constant(2, 0.9));
  EXPECT_THROW(EstimateLatentLogDensity(chain, P({0.0}), 0, 0), Error);
}

TEST(GaussianDdpmChainTest, RequiresGaussianModel) {
  const auto kde = DensityModel::Kde({P({0.0})}, 1.0);
  EXPECT_THROW(GaussianDdpmChain(kde, NoiseSchedule::Constant(1, 0.5)), Error);
}

TEST(GaussianDdpmChainTest, NoNoiseScheduleIsExact) {
  Eigen::MatrixXd cov(1, 1);
  cov << 2.5;
  const auto data = DensityModel::Gaussian(P({1.0}), cov);
  const auto chain = GaussianDdpmChain(data, NoiseSchedule{{1.0}});
  for (double x : {-2.0, 0.0, 1.0, 4.0}) {
    EXPECT_DOUBLE_EQ(LatentMcLogDensity(chain, P({x}), 3, 1), data.LogDensity(P({x})));
  }
}

TEST(GaussianDdpmChainTest, SampleIsReproducible) {
  const auto chain = GaussianDdpmChain(DensityModel::StandardNormal(2),
                                       NoiseSchedule::Constant(3, 0.9));
  const auto a = EstimateLatentLogDensity(chain, P({0.5, -0.5}), 64, 99);
  const auto b = EstimateLatentLogDensity(chain, P({0.5, -0.5}), 64, 99);
  const auto c = EstimateLatentLogDensity(chain, P({0.5, -0.5}), 64, 99, 4);
  EXPECT_EQ(a.log_density, b.log_density);
  EXPECT_EQ(a.log_density, c.log_density);
  EXPECT_EQ(a.log_std_error, c.log_std_error);
}

// With N(0, I) data every forward marginal stays N(0, I), so sampled
// latents must have unit variance at every level.
TEST(GaussianDdpmChainTest, StandardNormalMarginalsPreserved) {
  const auto chain = GaussianDdpmChain(DensityModel::StandardNormal(1),
                                       NoiseSchedule{{0.9, 0.5, 0.8}});
  const int draws = 200000;
  std::vector<double> sum(3, 0.0), sum_sq(3, 0.0);
  Rng rng(7);
  for (int k = 0; k < draws; ++k) {
    const auto latents = chain.sample_latents(rng);
    ASSERT_EQ(latents.size(), 3u);
    for (int t = 0; t < 3; ++t) {
      sum[t] += latents[t](0);
      sum_sq[t] += latents[t](0) * latents[t](0);
    }
  }
  for (int t = 0; t < 3; ++t) {
    EXPECT_NEAR(sum[t] / draws, 0.0, 0.01);
    EXPECT_NEAR(sum_sq[t] / draws, 1.0, 0.02);
  }
}

TEST(GaussianDdpmChainTest, MatchesAnalyticAtK1000) {
  const auto data = DensityModel::StandardNormal(1);
  const auto chain = GaussianDdpmChain(data, NoiseSchedule::Constant(3, 0.9));
  const auto est = EstimateLatentLogDensity(chain, P({0.0}), 1000, 20260101);
  EXPECT_LE(std::abs(est.log_density - data.LogDensity(P({0.0}))), 0.05);
}

// Correlated 2-D data: estimates at several points agree with the exact
// log density within 4 standard errors.
TEST(GaussianDdpmChainTest, CorrelatedDataAgreesWithinStdError) {
  Eigen::MatrixXd cov(2, 2);
  cov << 1.5, 0.4, 0.4, 0.6;
  const auto data = DensityModel::Gaussian(P({0.5, -1.0}), cov);
  const auto chain = GaussianDdpmChain(data, NoiseSchedule{{0.95, 0.8, 0.9, 0.7}});
  for (const Point& x : {P({0.5, -1.0}), P({1.5, -0.5}), P({-0.5, -1.5})}) {
    const auto est = EstimateLatentLogDensity(chain, x, 20000, 11);
    EXPECT_LE(std::abs(est.log_density - data.LogDensity(x)), 4.0 * est.log_std_error + 1e-3);
  }
}

TEST(GaussianDdpmChainTest, ErrorShrinksWithK) {
  const auto data = DensityModel::StandardNormal(1);
  const auto chain = GaussianDdpmChain(data, NoiseSchedule::Constant(3, 0.9));
  const double exact = data.LogDensity(P({0.0}));
  double previous = INFINITY;
  for (int k : {100, 1000, 10000}) {
    const auto est = EstimateLatentLogDensity(chain, P({0.0}), k, 20260101);
    const double err = std::abs(est.log_density - exact);
    EXPECT_LE(err, previous + 2.0 * est.log_std_error) << "K=" << k;
    previous = err;
  }
}

}  // namespace
}  // namespace royalty
