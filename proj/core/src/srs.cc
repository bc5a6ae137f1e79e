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

#include "royalty/srs.h"

#include <algorithm>
#include <cmath>

#include "royalty/error.h"
#include "royalty/numeric.h"

namespace royalty {

double RelativeUtility(double abs_utility, double baseline_utility) {
  if (!std::isfinite(abs_utility) || !std::isfinite(baseline_utility)) {
    throw Error(ErrorCode::kNonFinite, "utility inputs must be finite");
  }
  return abs_utility - baseline_utility;
}

SrsVector Srs(const ShapleyVector& phi) {
  const std::size_t n = phi.values.size();
  SrsVector out;
  out.shares.assign(n, 0.0);
  CompensatedSum total;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = phi.values[i];
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "Shapley value for player " + std::to_string(i) +
                      " is not finite");
    }
    out.shares[i] = std::max(v, 0.0);
    total.Add(out.shares[i]);
  }
  const double denominator = total.value();
  if (denominator > 0.0) {
    for (double& share : out.shares) share /= denominator;
    return out;
  }
  out.degenerate = true;
  if (n > 0) std::fill(out.shares.begin(), out.shares.end(), 1.0 / n);
  return out;
}

std::string SolverSpec::Tag() const {
  return kind == Kind::kExact ? "exact" : "mc";
}

Attribution SolveShapley(const CoalitionGame& game, const SolverSpec& solver) {
  Attribution out;
  out.solver = solver.Tag();
  if (solver.kind == SolverSpec::Kind::kExact) {
    out.phi = ExactShapley(game, solver.exact);
    return out;
  }
  EstimateReport report = PermutationSample(game, solver.mc);
  out.phi = std::move(report.estimate);
  out.std_errors = std::move(report.std_errors);
  return out;
}

SrsResult SrsFromGame(const CoalitionGame& game, const SolverSpec& solver) {
  SrsResult out;
  out.attribution = SolveShapley(game, solver);
  out.srs = Srs(out.attribution.phi);
  return out;
}

}  // namespace royalty
