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

#ifndef ROYALTY_LATENT_CHAIN_H_
#define ROYALTY_LATENT_CHAIN_H_

#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Core>

#include "royalty/dataset.h"
#include "royalty/density.h"
#include "royalty/random.h"

namespace royalty {

// Latent trajectories averaged per density estimate unless overridden.
inline constexpr int kDefaultLatentSamples = 20;

// Forward process x_t = sqrt(a_t) x_{t-1} + sqrt(1 - a_t) eps, t = 1..T.
struct NoiseSchedule {
  std::vector<double> alphas;

  static NoiseSchedule Constant(int steps, double alpha);

  // Throws InvalidArgument unless T >= 1 and every alpha is in (0, 1].
  void Validate() const;
};

// A reverse (denoising) chain, described by two procedures:
//   sample_latents(rng) -> x_T, ..., x_1
//   final_kernel_log_density(x, x_1) -> log p(x | x_1)
struct ReverseChain {
  int dimension = 0;
  std::function<std::vector<Point>(Rng&)> sample_latents;
  std::function<double(const Point& x, const Point& x1)>
      final_kernel_log_density;
};

// Linear-Gaussian chain for a Gaussian data model. Each reverse kernel is
// the exact posterior p(x_{t-1} | x_t) of the forward process started at the
// data model, and x_T is drawn from the exact forward marginal, so
// E[p(x | x_1)] equals the data density. Steps with alpha == 1 add no noise
// and are skipped; if every step is skipped the final kernel is the data
// model itself. Throws InvalidArgument for a non-Gaussian data model.
ReverseChain GaussianDdpmChain(const DensityModel& data_model,
                               const NoiseSchedule& schedule);

struct LatentMcEstimate {
  double log_density = 0.0;
  // Delta-method standard error of log_density: sd(w) / (sqrt(K) mean(w)).
  double log_std_error = 0.0;
  int samples = 0;
};

// log of the mean of p(x | x_1) over `samples` seeded latent trajectories,
// computed with log-mean-exp. Trajectory k draws from DeriveSeed(seed, k),
// so the estimate does not depend on `workers`.
LatentMcEstimate EstimateLatentLogDensity(const ReverseChain& chain,
                                          const Point& x, int samples,
                                          std::uint64_t seed, int workers = 1);

inline double LatentMcLogDensity(const ReverseChain& chain, const Point& x,
                                 int samples = kDefaultLatentSamples,
                                 std::uint64_t seed = 0) {
  return EstimateLatentLogDensity(chain, x, samples, seed).log_density;
}

}  // namespace royalty

#endif  // ROYALTY_LATENT_CHAIN_H_
