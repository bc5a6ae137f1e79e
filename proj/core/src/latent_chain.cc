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

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>

#include <Eigen/Cholesky>

#include "royalty/error.h"
#include "royalty/game.h"
#include "royalty/numeric.h"

namespace royalty {
namespace {

Point SampleGaussian(const Point& mean, const Eigen::MatrixXd& chol_l,
                     Rng& rng) {
  Eigen::VectorXd z(mean.size());
  for (Eigen::Index j = 0; j < z.size(); ++j) z(j) = rng.StandardNormal();
  return mean + chol_l * z;
}

Eigen::MatrixXd CholeskyL(const Eigen::MatrixXd& cov) {
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::kOracleFailure,
                "reverse kernel covariance not positive definite");
  }
  return llt.matrixL();
}

// x_{t-1} | x_t ~ N(gain x_t + offset, cov).
struct ReverseStep {
  Eigen::MatrixXd gain;
  Point offset;
  Eigen::MatrixXd chol_l;
};

struct GaussianChainState {
  Point prior_mean;              // forward marginal of x_T
  Eigen::MatrixXd prior_chol_l;
  std::vector<ReverseStep> steps;  // steps[0] maps x_1 -> x_0 (final kernel)
  std::unique_ptr<DensityModel> data_model;  // set when no step adds noise
  // Final kernel as a density with mean shifted per x_1.
  Eigen::MatrixXd final_gain;
  Point final_offset;
  std::unique_ptr<DensityModel> final_noise;  // N(0, cov_1)
};

}  // namespace

NoiseSchedule NoiseSchedule::Constant(int steps, double alpha) {
  NoiseSchedule schedule;
  schedule.alphas.assign(static_cast<std::size_t>(std::max(steps, 0)), alpha);
  schedule.Validate();
  return schedule;
}

void NoiseSchedule::Validate() const {
  if (alphas.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "noise schedule needs T >= 1");
  }
  for (const double a : alphas) {
    if (!(a > 0.0 && a <= 1.0)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "schedule alphas must lie in (0, 1], got " +
                      std::to_string(a));
    }
  }
}

ReverseChain GaussianDdpmChain(const DensityModel& data_model,
                               const NoiseSchedule& schedule) {
  schedule.Validate();
  if (data_model.kind() != DensityKind::kGaussianMle) {
    throw Error(ErrorCode::kInvalidArgument,
                "the Gaussian chain needs a Gaussian data model");
  }
  const int d = data_model.dimension();
  const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(d, d);

  auto state = std::make_shared<GaussianChainState>();
  std::vector<double> alphas;
  for (const double a : schedule.alphas) {
    if (a < 1.0) alphas.push_back(a);
  }

  ReverseChain chain;
  chain.dimension = d;

  if (alphas.empty()) {
    state->data_model = std::make_unique<DensityModel>(data_model);
    const Eigen::MatrixXd chol = CholeskyL(data_model.covariance());
    state->prior_mean = data_model.mean();
    state->prior_chol_l = chol;
    chain.sample_latents = [state](Rng& rng) {
      return std::vector<Point>{
          SampleGaussian(state->prior_mean, state->prior_chol_l, rng)};
    };
    chain.final_kernel_log_density = [state](const Point& x, const Point&) {
      return state->data_model->LogDensity(x);
    };
    return chain;
  }

  // Forward marginals x_t ~ N(m_t, C_t).
  std::vector<Point> means{data_model.mean()};
  std::vector<Eigen::MatrixXd> covs{data_model.covariance()};
  for (const double a : alphas) {
    means.push_back(std::sqrt(a) * means.back());
    covs.push_back(a * covs.back() + (1.0 - a) * identity);
  }

  // Exact posterior of x_{t-1} given x_t under the joint Gaussian.
  for (std::size_t t = 1; t <= alphas.size(); ++t) {
    const double root_a = std::sqrt(alphas[t - 1]);
    const Eigen::MatrixXd& prev = covs[t - 1];
    const Eigen::LLT<Eigen::MatrixXd> cur(covs[t]);
    // gain = sqrt(a) C_{t-1} C_t^{-1}; C's are symmetric.
    const Eigen::MatrixXd gain =
        cur.solve(root_a * prev).transpose();
    Eigen::MatrixXd cov = prev - root_a * gain * prev;
    cov = 0.5 * (cov + cov.transpose());
    ReverseStep step;
    step.gain = gain;
    step.offset = means[t - 1] - gain * means[t];
    step.chol_l = CholeskyL(cov);
    if (t == 1) {
      state->final_gain = gain;
      state->final_offset = step.offset;
      state->final_noise = std::make_unique<DensityModel>(
          DensityModel::Gaussian(Point::Zero(d), cov));
    }
    state->steps.push_back(std::move(step));
  }
  state->prior_mean = means.back();
  state->prior_chol_l = CholeskyL(covs.back());

  chain.sample_latents = [state](Rng& rng) {
    std::vector<Point> latents;
    latents.reserve(state->steps.size());
    latents.push_back(
        SampleGaussian(state->prior_mean, state->prior_chol_l, rng));
    // Walk x_T -> x_1; step index t-1 maps x_t -> x_{t-1}.
    for (std::size_t t = state->steps.size(); t >= 2; --t) {
      const ReverseStep& step = state->steps[t - 1];
      latents.push_back(SampleGaussian(
          step.gain * latents.back() + step.offset, step.chol_l, rng));
    }
    return latents;
  };
  chain.final_kernel_log_density = [state](const Point& x, const Point& x1) {
    return state->final_noise->LogDensity(x - state->final_gain * x1 -
                                          state->final_offset);
  };
  return chain;
}

LatentMcEstimate EstimateLatentLogDensity(const ReverseChain& chain,
                                          const Point& x, int samples,
                                          std::uint64_t seed, int workers) {
  if (samples < 1) {
    throw Error(ErrorCode::kInvalidArgument, "need at least one latent sample");
  }
  if (x.size() != chain.dimension) {
    throw Error(ErrorCode::kDimensionMismatch,
                "point dimension does not match the chain");
  }
  std::vector<double> log_terms(static_cast<std::size_t>(samples));
  ParallelFor(samples, workers, [&](std::int64_t k) {
    Rng rng(DeriveSeed(seed, static_cast<std::uint64_t>(k)));
    const std::vector<Point> latents = chain.sample_latents(rng);
    log_terms[static_cast<std::size_t>(k)] =
        chain.final_kernel_log_density(x, latents.back());
  });

  LatentMcEstimate estimate;
  estimate.samples = samples;
  estimate.log_density = LogMeanExp(log_terms);
  if (samples > 1) {
    const double peak = *std::max_element(log_terms.begin(), log_terms.end());
    CompensatedSum sum, sum_sq;
    for (const double l : log_terms) {
      const double w = std::exp(l - peak);
      sum.Add(w);
      sum_sq.Add(w * w);
    }
    const double k = static_cast<double>(samples);
    const double mean = sum.value() / k;
    const double var =
        std::max(0.0, (sum_sq.value() - k * mean * mean) / (k - 1.0));
    estimate.log_std_error = std::sqrt(var / k) / mean;
  }
  return estimate;
}

}  // namespace royalty
