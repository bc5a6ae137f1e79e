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

#ifndef ROYALTY_COALITION_UTILITY_H_
#define ROYALTY_COALITION_UTILITY_H_

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string_view>
#include <vector>

#include "royalty/coalition.h"
#include "royalty/dataset.h"
#include "royalty/density.h"
#include "royalty/game.h"
#include "royalty/latent_chain.h"

namespace royalty {

enum class OracleKind {
  kGaussianMle,
  kKde,
  // Gaussian fit, with log p(x) estimated by latent Monte Carlo over the
  // matching linear-Gaussian reverse chain.
  kLatentChain,
};

std::string_view OracleKindName(OracleKind kind);

struct OracleConfig {
  OracleKind kind = OracleKind::kGaussianMle;
  double ridge = 0.0;
  // KDE bandwidth; Scott's rule when unset.
  std::optional<double> kde_bandwidth;
  // Latent-chain settings.
  NoiseSchedule schedule = NoiseSchedule{{0.9, 0.9, 0.9}};
  int latent_samples = kDefaultLatentSamples;
  std::uint64_t latent_seed = 0;
};

// v(S) = log p_S(x | Q) - log p_empty(x | Q) for one generation event, where
// p_S is fit on the pooled data of the owners in S and p_empty is the
// baseline model. Conditioning keeps only points whose label matches the
// event's label; a nonempty coalition with no matching points falls back to
// all of its points and is recorded in fallback_coalitions().
class CoalitionUtility {
 public:
  // Throws InvalidArgument / DimensionMismatch for inconsistent inputs.
  CoalitionUtility(Partition partition, DensityModel baseline,
                   GenerationEvent event, OracleConfig config);

  int n() const { return static_cast<int>(partition_.size()); }
  int dimension() const { return dimension_; }

  // 0 for the empty coalition. Throws OracleFailure when the coalition holds
  // no points at all.
  double Evaluate(Coalition s) const;

  // Absolute log p_S(x | Q); for S empty, the baseline.
  double AbsoluteLogDensity(Coalition s) const;

  // The model p_S (without the latent-chain estimate).
  DensityModel FitCoalition(Coalition s, bool* fell_back = nullptr) const;

  std::vector<Coalition> fallback_coalitions() const;

 private:
  double ModelLogDensity(const DensityModel& model,
                         std::uint64_t stream) const;

  Partition partition_;
  DensityModel baseline_;
  GenerationEvent event_;
  OracleConfig config_;
  int dimension_ = 0;
  double baseline_log_density_ = 0.0;
  mutable std::mutex fallback_mu_;
  mutable std::set<std::uint64_t> fallbacks_;
};

// Oracle view for CoalitionGame; keeps `utility` alive.
UtilityOracle MakeOracle(std::shared_ptr<const CoalitionUtility> utility);

}  // namespace royalty

#endif  // ROYALTY_COALITION_UTILITY_H_
