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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>

#include "royalty/error.h"
#include "royalty/numeric.h"

namespace royalty {
namespace {

const double kLog2Pi = std::log(2.0 * std::numbers::pi);

void CheckPoints(std::span<const Point> points) {
  if (points.empty()) {
    throw Error(ErrorCode::kEmptyDataset, "cannot fit a density on 0 points");
  }
  const auto d = points.front().size();
  if (d < 1) throw Error(ErrorCode::kDimensionMismatch, "points need d >= 1");
  for (const Point& p : points) {
    if (p.size() != d) {
      throw Error(ErrorCode::kDimensionMismatch, "mixed point dimensions");
    }
  }
}

}  // namespace

DensityModel DensityModel::StandardNormal(int dimension) {
  return Gaussian(Point::Zero(dimension),
                  Eigen::MatrixXd::Identity(dimension, dimension));
}

DensityModel DensityModel::Gaussian(Point mean,
                                    const Eigen::MatrixXd& covariance,
                                    int fit_count) {
  const auto d = mean.size();
  if (d < 1 || covariance.rows() != d || covariance.cols() != d) {
    throw Error(ErrorCode::kDimensionMismatch,
                "covariance shape does not match mean");
  }
  if (!covariance.allFinite() || !mean.allFinite()) {
    throw Error(ErrorCode::kNonFinite, "Gaussian parameters must be finite");
  }
  const double scale = std::max(1.0, covariance.cwiseAbs().maxCoeff());
  if ((covariance - covariance.transpose()).cwiseAbs().maxCoeff() >
      1e-12 * scale) {
    throw Error(ErrorCode::kInvalidArgument, "covariance must be symmetric");
  }
  DensityModel model;
  model.kind_ = DensityKind::kGaussianMle;
  model.dimension_ = static_cast<int>(d);
  model.fit_count_ = fit_count;
  model.mean_ = std::move(mean);
  model.covariance_ = covariance;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eigen(covariance);
  if (eigen.info() != Eigen::Success) {
    throw Error(ErrorCode::kOracleFailure, "covariance eigendecomposition");
  }
  if (eigen.eigenvalues().minCoeff() < kCovarianceFloor) {
    const Eigen::VectorXd floored =
        eigen.eigenvalues().cwiseMax(kCovarianceFloor);
    model.covariance_ = eigen.eigenvectors() * floored.asDiagonal() *
                        eigen.eigenvectors().transpose();
  }
  Eigen::LLT<Eigen::MatrixXd> llt(model.covariance_);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::kOracleFailure,
                "covariance not positive definite after flooring");
  }
  model.cholesky_l_ = llt.matrixL();
  const double log_det =
      2.0 * model.cholesky_l_.diagonal().array().log().sum();
  model.log_normalizer_ = -0.5 * (static_cast<double>(d) * kLog2Pi + log_det);
  return model;
}

DensityModel DensityModel::Kde(std::vector<Point> support, double bandwidth) {
  CheckPoints(support);
  if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) {
    throw Error(ErrorCode::kInvalidArgument, "KDE bandwidth must be > 0");
  }
  DensityModel model;
  model.kind_ = DensityKind::kKde;
  model.dimension_ = static_cast<int>(support.front().size());
  model.fit_count_ = static_cast<int>(support.size());
  model.bandwidth_ = bandwidth;
  model.log_normalizer_ = -0.5 * model.dimension_ *
                          (kLog2Pi + 2.0 * std::log(bandwidth));
  model.support_ = std::move(support);
  return model;
}

double DensityModel::LogDensity(const Point& x) const {
  if (x.size() != dimension_) {
    throw Error(ErrorCode::kDimensionMismatch,
                "point has dimension " + std::to_string(x.size()) +
                    ", model expects " + std::to_string(dimension_));
  }
  if (kind_ == DensityKind::kGaussianMle) {
    const Eigen::VectorXd z =
        cholesky_l_.triangularView<Eigen::Lower>().solve(x - mean_);
    return log_normalizer_ - 0.5 * z.squaredNorm();
  }
  std::vector<double> terms;
  terms.reserve(support_.size());
  const double inv_two_h2 = 0.5 / (bandwidth_ * bandwidth_);
  for (const Point& p : support_) {
    terms.push_back(log_normalizer_ - (x - p).squaredNorm() * inv_two_h2);
  }
  return LogMeanExp(terms);
}

DensityModel FitGaussian(std::span<const Point> points, double ridge) {
  CheckPoints(points);
  if (!(ridge >= 0.0) || !std::isfinite(ridge)) {
    throw Error(ErrorCode::kInvalidArgument, "ridge must be finite and >= 0");
  }
  const auto d = points.front().size();
  const double m = static_cast<double>(points.size());
  Point mean = Point::Zero(d);
  for (const Point& p : points) mean += p;
  mean /= m;
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(d, d);
  for (const Point& p : points) {
    const Eigen::VectorXd c = p - mean;
    cov.noalias() += c * c.transpose();
  }
  cov /= m;
  cov.diagonal().array() += ridge;
  return DensityModel::Gaussian(std::move(mean), cov,
                                static_cast<int>(points.size()));
}

double ScottBandwidth(std::span<const Point> points) {
  CheckPoints(points);
  const auto d = points.front().size();
  const double m = static_cast<double>(points.size());
  Point mean = Point::Zero(d);
  for (const Point& p : points) mean += p;
  mean /= m;
  double total_variance = 0.0;
  for (const Point& p : points) total_variance += (p - mean).squaredNorm();
  const double sigma = std::sqrt(total_variance / (m * static_cast<double>(d)));
  if (!(sigma > 0.0)) return 1.0;
  return sigma * std::pow(m, -1.0 / (static_cast<double>(d) + 4.0));
}

DensityModel FitKde(std::span<const Point> points,
                    std::optional<double> bandwidth) {
  CheckPoints(points);
  const double h = bandwidth ? *bandwidth : ScottBandwidth(points);
  return DensityModel::Kde(std::vector<Point>(points.begin(), points.end()), h);
}

}  // namespace royalty
