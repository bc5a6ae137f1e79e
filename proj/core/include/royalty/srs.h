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

#ifndef ROYALTY_SRS_H_
#define ROYALTY_SRS_H_

#include <optional>
#include <string>
#include <vector>

#include "royalty/game.h"
#include "royalty/shapley_exact.h"
#include "royalty/shapley_mc.h"

namespace royalty {

// log p_S(x) - log p_empty(x). Throws NonFinite on NaN or infinite input.
double RelativeUtility(double abs_utility, double baseline_utility);

// Royalty shares: Shapley values clamped at zero and normalized.
//
// When every clamped value is zero there is nothing to normalize; the shares
// are then uniform and `degenerate` is set.
struct SrsVector {
  std::vector<double> shares;
  bool degenerate = false;
};

// Throws InvalidArgument if any value is not finite.
SrsVector Srs(const ShapleyVector& phi);

// Which Shapley solver to run.
struct SolverSpec {
  enum class Kind { kExact, kMonteCarlo };

  Kind kind = Kind::kExact;
  ExactOptions exact;
  EstimatorConfig mc;

  static SolverSpec Exact(int workers = 1) {
    SolverSpec spec;
    spec.exact.workers = workers;
    return spec;
  }
  static SolverSpec MonteCarlo(const EstimatorConfig& cfg) {
    SolverSpec spec;
    spec.kind = Kind::kMonteCarlo;
    spec.mc = cfg;
    return spec;
  }

  // "exact" or "mc".
  std::string Tag() const;
};

struct Attribution {
  ShapleyVector phi;
  // Present for Monte-Carlo solves.
  std::optional<std::vector<double>> std_errors;
  std::string solver;
};

Attribution SolveShapley(const CoalitionGame& game, const SolverSpec& solver);

struct SrsResult {
  SrsVector srs;
  Attribution attribution;
};

SrsResult SrsFromGame(const CoalitionGame& game, const SolverSpec& solver);

}  // namespace royalty

#endif  // ROYALTY_SRS_H_
