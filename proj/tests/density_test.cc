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

#include "royalty/density.h"

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Eigenvalues>

#include "gtest/gtest.h"
#include "royalty/error.h"

namespace royalty {
namespace {

constexpr double kHalfLog2Pi = 0.91893853320467274178;

Point P(std::initializer_list<double> v) {
  Point p(static_cast<Eigen::Index>(v.size()));
  Eigen::Index k = 0;
  for (double x : v) p(k++) = x;
  return p;
}

TEST(FitGaussianTest, TwoPointMle) {
  const std::vector<Point> pts = {P({-1.0}), P({1.0})};
  const auto model = FitGaussian(pts, 0.0);
  EXPECT_EQ(model.kind(), DensityKind::kGaussianMle);
  EXPECT_EQ(model.fit_count(), 2);
  EXPECT_DOUBLE_EQ(model.mean()(0), 0.0);
  EXPECT_DOUBLE_EQ(model.covariance()(0, 0), 1.0);
}

TEST(FitGaussianTest, SinglePointWithRidge) {
  const std::vector<Point> pts = {P({2.5})};
  const auto model = FitGaussian(pts, 0.1);
  EXPECT_DOUBLE_EQ(model.mean()(0), 2.5);
  EXPECT_DOUBLE_EQ(model.covariance()(0, 0), 0.1);
}

TEST(FitGaussianTest, SinglePointWithoutRidgeIsFloored) {
  const std::vector<Point> pts = {P({2.5, -1.0})};
  const auto model = FitGaussian(pts, 0.0);
  EXPECT_DOUBLE_EQ(model.covariance()(0, 0), kCovarianceFloor);
  EXPECT_DOUBLE_EQ(model.covariance()(1, 1), kCovarianceFloor);
  EXPECT_TRUE(std::isfinite(model.LogDensity(P({2.5, -1.0}))));
  EXPECT_TRUE(std::isfinite(model.LogDensity(P({100.0, 40.0}))));
}

TEST(FitGaussianTest, CollinearPointsFloorOnlyTheFlatDirection) {
  const std::vector<Point> pts = {P({0.0, 0.0}), P({1.0, 1.0}), P({2.0, 2.0})};
  const auto model = FitGaussian(pts, 0.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(model.covariance());
  EXPECT_NEAR(eig.eigenvalues()(0), kCovarianceFloor, 1e-12);
  EXPECT_NEAR(eig.eigenvalues()(1), 4.0 / 3.0, 1e-12);
}

TEST(FitGaussianTest, EmptyDataset) {
  try {
    FitGaussian(std::vector<Point>{}, 0.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyDataset);
  }
}

TEST(LogDensityTest, StandardNormal) {
  const auto model = DensityModel::StandardNormal(1);
  EXPECT_NEAR(model.LogDensity(P({0.0})), -0.9189385, 1e-7);
  EXPECT_NEAR(model.LogDensity(P({2.0})), -2.9189385, 1e-7);
}

TEST(LogDensityTest, SingleKernelKde) {
  const auto model = DensityModel::Kde({P({0.0})}, 1.0);
  EXPECT_EQ(model.kind(), DensityKind::kKde);
  EXPECT_NEAR(model.LogDensity(P({0.0})), -0.9189385, 1e-7);
}

TEST(LogDensityTest, DimensionMismatch) {
  const auto model = DensityModel::StandardNormal(2);
  try {
    model.LogDensity(P({0.0}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDimensionMismatch);
  }
  EXPECT_THROW(DensityModel::Kde({P({0.0})}, 1.0).LogDensity(P({0.0, 1.0})), Error);
}

// Full-covariance Gaussian against the closed form.
TEST(LogDensityTest, CorrelatedGaussianClosedForm) {
  Eigen::MatrixXd cov(2, 2);
  cov << 2.0, 0.6, 0.6, 1.0;
  const auto model = DensityModel::Gaussian(P({1.0, -1.0}), cov);
  const Point x = P({0.5, 0.25});
  const Eigen::Vector2d d(-0.5, 1.25);
  const double det = 2.0 * 1.0 - 0.36;
  const double quad = d.dot(cov.inverse() * d);
  const double expected = -2.0 * kHalfLog2Pi - 0.5 * std::log(det) - 0.5 * quad;
  EXPECT_NEAR(model.LogDensity(x), expected, 1e-12);
}

TEST(LogDensityTest, KdeClosedForm) {
  const std::vector<Point> support = {P({0.0}), P({2.0})};
  const auto model = DensityModel::Kde(support, 0.5);
  const double x = 0.7;
  auto kernel = [](double z) {
    return std::exp(-0.5 * z * z) / (0.5 * std::sqrt(2.0 * std::numbers::pi));
  };
  const double expected = std::log(0.5 * (kernel(x / 0.5) + kernel((x - 2.0) / 0.5)));
  EXPECT_NEAR(model.LogDensity(P({x})), expected, 1e-12);
}

TEST(LogDensityTest, FiniteFarFromKdeSupport) {
  const auto model = DensityModel::Kde({P({0.0, 0.0})}, 0.01);
  EXPECT_TRUE(std::isfinite(model.LogDensity(P({1e3, -1e3}))));
}

TEST(KdeTest, ScottBandwidth) {
  std::vector<Point> pts;
  for (int k = 0; k < 16; ++k) pts.push_back(P({double(k % 2), double(k % 4)}));
  // Pooled population variance of the two coordinates: (0.25 + 1.25) / 2.
  const double sigma = std::sqrt(0.75);
  EXPECT_NEAR(ScottBandwidth(pts), sigma * std::pow(16.0, -1.0 / 6.0), 1e-12);
}

TEST(KdeTest, NoSpreadFallsBackToUnitBandwidth) {
  const std::vector<Point> pts = {P({3.0}), P({3.0})};
  EXPECT_EQ(ScottBandwidth(pts), 1.0);
  EXPECT_EQ(FitKde(pts).bandwidth(), 1.0);
  EXPECT_EQ(FitKde(pts, 0.25).bandwidth(), 0.25);
  EXPECT_THROW(DensityModel::Kde({P({0.0})}, 0.0), Error);
  EXPECT_THROW(FitKde(std::vector<Point>{}), Error);
}

TEST(GaussianModelTest, RejectsAsymmetricOrMismatched) {
  Eigen::MatrixXd cov(2, 2);
  cov << 1.0, 0.5, 0.0, 1.0;
  EXPECT_THROW(DensityModel::Gaussian(P({0.0, 0.0}), cov), Error);
  EXPECT_THROW(DensityModel::Gaussian(P({0.0}), Eigen::MatrixXd::Identity(2, 2)), Error);
}

}  // namespace
}  // namespace royalty
