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

#ifndef ROYALTY_PERMISSION_GAME_H_
#define ROYALTY_PERMISSION_GAME_H_

#include <memory>
#include <span>
#include <vector>

#include "royalty/game.h"
#include "royalty/srs.h"

namespace royalty {

// The owners' game augmented with the AI developer as a gatekeeper player.
// The developer takes index n (always last). A coalition produces the base
// utility of its owners when the developer is present and nothing otherwise.
//
// Holds a reference to `base`; the base game must outlive this object.
class PermissionGame {
 public:
  explicit PermissionGame(const CoalitionGame& base);

  const CoalitionGame& base() const { return *base_; }
  const CoalitionGame& augmented() const { return *augmented_; }

  int owner_count() const { return base_->n(); }
  PlayerId developer() const { return base_->n(); }

 private:
  const CoalitionGame* base_;
  std::unique_ptr<CoalitionGame> augmented_;
};

// Shapley vector over n + 1 players, the developer last. Requires
// v(empty) == 0 in the base game (InvalidArgument otherwise).
ShapleyVector PermissionShapley(const PermissionGame& pg,
                                const SolverSpec& solver);

struct DeveloperSplit {
  double beta_data = 0.0;
  double developer_share = 0.0;
  // Fraction of each payment owed to each owner; sums to beta_data.
  std::vector<double> owner_payout_fractions;
};

// beta_data = 1 - SRS(developer) in the augmented game; owner fractions are
// the augmented SRS restricted to the owners.
DeveloperSplit ComputeDeveloperSplit(const PermissionGame& pg,
                                     const SolverSpec& solver);

// Configured retention: owner fractions beta_data * owner_shares[i].
DeveloperSplit FixedDeveloperSplit(double beta_data,
                                   std::span<const double> owner_shares);

}  // namespace royalty

#endif  // ROYALTY_PERMISSION_GAME_H_
