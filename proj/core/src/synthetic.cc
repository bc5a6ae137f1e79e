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

#include "royalty/synthetic.h"

#include <cmath>
#include <numbers>
#include <string>

#include "royalty/error.h"
#include "royalty/numeric.h"
#include "royalty/random.h"

namespace royalty {
namespace {

Point Polar(double radius, double angle) {
  Point p(2);
  p << kDomainCenterX + radius * std::cos(angle), radius * std::sin(angle);
  return p;
}

std::vector<Point> SampleCluster(const Point& center, int count, Rng& rng) {
  std::vector<Point> points;
  points.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    Point p = center;
    for (Eigen::Index j = 0; j < p.size(); ++j) {
      p(j) += kClusterStdDev * rng.StandardNormal();
    }
    points.push_back(std::move(p));
  }
  return points;
}

}  // namespace

std::string_view ScenarioName(Scenario scenario) {
  switch (scenario) {
    case Scenario::kRanking:
      return "ranking";
    case Scenario::kIrrelevant:
      return "irrelevant";
    case Scenario::kDuplicate:
      return "duplicate";
  }
  return "unknown";
}

Scenario ParseScenario(std::string_view name) {
  for (const Scenario s :
       {Scenario::kRanking, Scenario::kIrrelevant, Scenario::kDuplicate}) {
    if (ScenarioName(s) == name) return s;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unknown scenario '" + std::string(name) + "'");
}

SyntheticSetup MakeSetup(Scenario scenario, std::uint64_t seed,
                         int points_per_owner) {
  if (points_per_owner < 1) {
    throw Error(ErrorCode::kInvalidArgument, "points_per_owner must be >= 1");
  }
  constexpr double kPi = std::numbers::pi;
  SyntheticSetup setup;
  setup.scenario = scenario;
  Rng rng(DeriveStream(seed, "synthetic_owners"));
  switch (scenario) {
    case Scenario::kRanking: {
      setup.target_center = Polar(0.0, 0.0);
      const double angles[4] = {0.0, kPi / 2, kPi, -kPi / 2};
      for (int i = 0; i < 4; ++i) {
        Point c = setup.target_center;
        c(0) += kRankingOffsets[i] * std::cos(angles[i]);
        c(1) += kRankingOffsets[i] * std::sin(angles[i]);
        setup.owner_centers.push_back(std::move(c));
      }
      break;
    }
    case Scenario::kIrrelevant:
      setup.target_center = Polar(0.0, 0.0);
      for (int i = 0; i < 4; ++i) {
        setup.owner_centers.push_back(Polar(kIrrelevantRadius, i * kPi / 2));
      }
      break;
    case Scenario::kDuplicate:
      setup.target_center = Polar(0.0, 0.0);
      setup.owner_centers = {setup.target_center, setup.target_center};
      break;
  }
  for (std::size_t i = 0; i < setup.owner_centers.size(); ++i) {
    OwnerDataset owner;
    owner.owner = static_cast<PlayerId>(i);
    if (scenario == Scenario::kDuplicate && i == 1) {
      owner.points = setup.partition[0].points;
    } else {
      owner.points =
          SampleCluster(setup.owner_centers[i], points_per_owner, rng);
    }
    owner.labels.assign(owner.points.size(), "owner" + std::to_string(i));
    setup.partition.push_back(std::move(owner));
  }
  return setup;
}

GenerationEvent SampleTarget(const SyntheticSetup& setup, std::uint64_t seed,
                             std::int64_t index) {
  Rng rng(DeriveSeed(DeriveStream(seed, "synthetic_targets"),
                     static_cast<std::uint64_t>(index)));
  Point offset(setup.target_center.size());
  do {
    for (Eigen::Index j = 0; j < offset.size(); ++j) {
      offset(j) = kClusterStdDev * rng.StandardNormal();
    }
  } while (offset.norm() > 2.0 * kClusterStdDev);
  return GenerationEvent{setup.target_center + offset, std::nullopt};
}

std::vector<Transaction> MakeSyntheticTransactions(
    std::int64_t count, const std::vector<double>& mean_shares, double price,
    double jitter, std::uint64_t seed) {
  if (mean_shares.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "need at least one owner");
  }
  if (!(jitter >= 0.0 && jitter < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "jitter must be in [0, 1)");
  }
  std::vector<Transaction> out;
  out.reserve(static_cast<std::size_t>(count));
  Rng rng(DeriveStream(seed, "synthetic_transactions"));
  for (std::int64_t t = 0; t < count; ++t) {
    SrsVector srs;
    CompensatedSum total;
    for (const double m : mean_shares) {
      const double w = m * (1.0 + jitter * (2.0 * rng.Uniform01() - 1.0));
      srs.shares.push_back(w);
      total.Add(w);
    }
    for (double& s : srs.shares) s /= total.value();
    Transaction tx;
    tx.id = "tx" + std::to_string(t);
    tx.price = price;
    tx.event.x = Point(0);
    tx.srs = std::move(srs);
    out.push_back(std::move(tx));
  }
  return out;
}

}  // namespace royalty
