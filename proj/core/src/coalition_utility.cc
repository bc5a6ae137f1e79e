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

#include "royalty/coalition_utility.h"

#include <string>
#include <utility>

#include "royalty/error.h"
#include "royalty/srs.h"

namespace royalty {

std::string_view OracleKindName(OracleKind kind) {
  switch (kind) {
    case OracleKind::kGaussianMle:
      return "gaussian_mle";
    case OracleKind::kKde:
      return "kde";
    case OracleKind::kLatentChain:
      return "latent_chain";
  }
  return "unknown";
}

CoalitionUtility::CoalitionUtility(Partition partition, DensityModel baseline,
                                   GenerationEvent event, OracleConfig config)
    : partition_(std::move(partition)),
      baseline_(std::move(baseline)),
      event_(std::move(event)),
      config_(std::move(config)) {
  dimension_ = ValidatePartition(partition_);
  if (dimension_ == 0) dimension_ = baseline_.dimension();
  if (event_.x.size() != dimension_) {
    throw Error(ErrorCode::kDimensionMismatch,
                "event has dimension " + std::to_string(event_.x.size()) +
                    ", dataset has " + std::to_string(dimension_));
  }
  if (baseline_.dimension() != dimension_) {
    throw Error(ErrorCode::kDimensionMismatch,
                "baseline dimension does not match the dataset");
  }
  if (config_.kind == OracleKind::kLatentChain) {
    config_.schedule.Validate();
    if (config_.latent_samples < 1) {
      throw Error(ErrorCode::kInvalidArgument, "latent_samples must be >= 1");
    }
  }
  // The baseline uses a stream no coalition can collide with.
  baseline_log_density_ = ModelLogDensity(baseline_, ~std::uint64_t{0});
}

double CoalitionUtility::ModelLogDensity(const DensityModel& model,
                                         std::uint64_t stream) const {
  if (config_.kind != OracleKind::kLatentChain ||
      model.kind() != DensityKind::kGaussianMle) {
    return model.LogDensity(event_.x);
  }
  const ReverseChain chain = GaussianDdpmChain(model, config_.schedule);
  return LatentMcLogDensity(chain, event_.x, config_.latent_samples,
                            DeriveSeed(config_.latent_seed, stream));
}

DensityModel CoalitionUtility::FitCoalition(Coalition s,
                                            bool* fell_back) const {
  if (fell_back != nullptr) *fell_back = false;
  if (s.empty()) return baseline_;
  if (!s.FitsIn(n())) {
    throw Error(ErrorCode::kIndexOutOfRange,
                "coalition " + s.ToString() + " exceeds the partition");
  }
  std::vector<Point> pooled;
  std::vector<Point> matching;
  for (const PlayerId i : s.Members()) {
    const OwnerDataset& owner = partition_[static_cast<std::size_t>(i)];
    for (std::size_t k = 0; k < owner.points.size(); ++k) {
      pooled.push_back(owner.points[k]);
      if (event_.conditioning && !owner.labels.empty() &&
          owner.labels[k] == *event_.conditioning) {
        matching.push_back(owner.points[k]);
      }
    }
  }
  if (pooled.empty()) {
    throw Error(ErrorCode::kOracleFailure,
                "coalition " + s.ToString() + " has no training points");
  }
  const std::vector<Point>* training = &pooled;
  if (event_.conditioning) {
    if (matching.empty()) {
      if (fell_back != nullptr) *fell_back = true;
    } else {
      training = &matching;
    }
  }
  if (config_.kind == OracleKind::kKde) {
    return FitKde(*training, config_.kde_bandwidth);
  }
  return FitGaussian(*training, config_.ridge);
}

double CoalitionUtility::AbsoluteLogDensity(Coalition s) const {
  if (s.empty()) return baseline_log_density_;
  bool fell_back = false;
  const DensityModel model = FitCoalition(s, &fell_back);
  if (fell_back) {
    std::lock_guard lock(fallback_mu_);
    fallbacks_.insert(s.bits());
  }
  return ModelLogDensity(model, s.bits());
}

double CoalitionUtility::Evaluate(Coalition s) const {
  if (s.empty()) return 0.0;
  return RelativeUtility(AbsoluteLogDensity(s), baseline_log_density_);
}

std::vector<Coalition> CoalitionUtility::fallback_coalitions() const {
  std::lock_guard lock(fallback_mu_);
  std::vector<Coalition> out;
  out.reserve(fallbacks_.size());
  for (const std::uint64_t bits : fallbacks_) out.emplace_back(bits);
  return out;
}

UtilityOracle MakeOracle(std::shared_ptr<const CoalitionUtility> utility) {
  return [utility = std::move(utility)](Coalition s) {
    return utility->Evaluate(s);
  };
}

}  // namespace royalty
