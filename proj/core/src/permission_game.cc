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

#include "royalty/permission_game.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "royalty/error.h"

namespace royalty {

PermissionGame::PermissionGame(const CoalitionGame& base) : base_(&base) {
  if (base.n() + 1 > kMaxPlayers) {
    throw Error(ErrorCode::kTooManyPlayers,
                "permission game needs room for the developer player");
  }
  const PlayerId dev = base.n();
  const CoalitionGame* owners = base_;
  augmented_ = std::make_unique<CoalitionGame>(
      base.n() + 1, [owners, dev](Coalition s) {
        if (!s.Contains(dev)) return 0.0;
        return owners->Evaluate(s.Without(dev));
      });
}

ShapleyVector PermissionShapley(const PermissionGame& pg,
                                const SolverSpec& solver) {
  const double empty = pg.base().Evaluate(Coalition::Empty());
  if (empty != 0.0) {
    throw Error(ErrorCode::kInvalidArgument,
                "permission game requires v(empty) == 0, got " +
                    std::to_string(empty));
  }
  SolverSpec augmented_solver = solver;
  // The augmented game has one more player than the owners' game.
  if (augmented_solver.kind == SolverSpec::Kind::kExact) {
    augmented_solver.exact.exact_limit =
        std::max(augmented_solver.exact.exact_limit, pg.owner_count() + 1);
  }
  return SolveShapley(pg.augmented(), augmented_solver).phi;
}

DeveloperSplit ComputeDeveloperSplit(const PermissionGame& pg,
                                     const SolverSpec& solver) {
  const SrsVector srs = Srs(PermissionShapley(pg, solver));
  const auto n = static_cast<std::size_t>(pg.owner_count());
  DeveloperSplit split;
  split.developer_share = srs.shares[n];
  split.beta_data = 1.0 - split.developer_share;
  split.owner_payout_fractions.assign(srs.shares.begin(),
                                      srs.shares.begin() + n);
  return split;
}

DeveloperSplit FixedDeveloperSplit(double beta_data,
                                   std::span<const double> owner_shares) {
  if (!(beta_data >= 0.0 && beta_data <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "beta_data must be in [0, 1]");
  }
  DeveloperSplit split;
  split.beta_data = beta_data;
  split.developer_share = 1.0 - beta_data;
  split.owner_payout_fractions.reserve(owner_shares.size());
  for (const double share : owner_shares) {
    split.owner_payout_fractions.push_back(beta_data * share);
  }
  return split;
}

}  // namespace royalty
