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

#ifndef ROYALTY_DENSITY_H_
#define ROYALTY_DENSITY_H_

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "royalty/dataset.h"

namespace royalty {

enum class DensityKind { kGaussianMle, kKde };

// Smallest eigenvalue a fitted covariance may have.
inline constexpr double kCovarianceFloor = 1e-6;

// A fitted density: either a single full-covariance Gaussian or an isotropic
// Gaussian kernel density estimate.
class DensityModel {
 public:
  // N(0, I_d).
  static DensityModel StandardNormal(int dimension);

  // Eigenvalues below kCovarianceFloor are raised to it. `covariance` must
  // be symmetric.
  static DensityModel Gaussian(Point mean, const Eigen::MatrixXd& covariance,
                               int fit_count = 0);

  // `bandwidth` must be positive.
  static DensityModel Kde(std::vector<Point> support, double bandwidth);

  DensityKind kind() const { return kind_; }
  int dimension() const { return dimension_; }
  int fit_count() const { return fit_count_; }

  // Gaussian parameters (empty for KDE).
  const Point& mean() const { return mean_; }
  const Eigen::MatrixXd& covariance() const { return covariance_; }

  // KDE parameters (empty / zero for Gaussian).
  const std::vector<Point>& support() const { return support_; }
  double bandwidth() const { return bandwidth_; }

  // Exact log density in nats. Throws DimensionMismatch.
  double LogDensity(const Point& x) const;

 private:
  DensityModel() = default;

  DensityKind kind_ = DensityKind::kGaussianMle;
  int dimension_ = 0;
  int fit_count_ = 0;
  Point mean_;
  Eigen::MatrixXd covariance_;
  Eigen::MatrixXd cholesky_l_;
  double log_normalizer_ = 0.0;
  std::vector<Point> support_;
  double bandwidth_ = 0.0;
};

// Maximum-likelihood Gaussian (covariance divides by the point count) with
// ridge * I added, then floored. Throws EmptyDataset.
DensityModel FitGaussian(std::span<const Point> points, double ridge = 0.0);

// Scott's rule on the pooled per-coordinate standard deviation,
// sigma * m^(-1 / (d + 4)). Falls back to 1.0 when the points have no
// spread (a single point, or exact duplicates).
double ScottBandwidth(std::span<const Point> points);

// Gaussian KDE over `points`; bandwidth defaults to ScottBandwidth.
DensityModel FitKde(std::span<const Point> points,
                    std::optional<double> bandwidth = std::nullopt);

}  // namespace royalty

#endif  // ROYALTY_DENSITY_H_
