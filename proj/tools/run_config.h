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

#ifndef ROYALTY_TOOLS_RUN_CONFIG_H_
#define ROYALTY_TOOLS_RUN_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "royalty/coalition_utility.h"
#include "royalty/dataset.h"
#include "royalty/game.h"
#include "royalty/srs.h"

namespace royalty::cli {

// Invalid or inconsistent configuration; exit status 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class BaselineKind { kStandardNormal, kDataset };
enum class SolverKind { kExact, kMonteCarlo };
enum class SettleMode { kFull, kSample };

// Utilities given directly instead of through a dataset: either additive
// weights or a full table indexed by coalition bit pattern.
struct ExplicitGame {
  std::vector<double> additive_weights;
  std::vector<double> table;
};

// Everything a command needs, after defaults and flag overrides.
struct RunConfig {
  std::optional<std::filesystem::path> dataset;
  BaselineKind baseline = BaselineKind::kStandardNormal;
  std::filesystem::path baseline_dataset;
  OracleConfig oracle;
  std::optional<ExplicitGame> game;
  SolverKind solver = SolverKind::kExact;
  int permutations = kDefaultPermutations;
  double truncation = 0.0;
  // Unset means "command default": permission game for developer-share,
  // 1.0 for settlement.
  std::optional<double> fixed_beta;
  bool beta_permission = false;
  int density_mc_samples = kDefaultLatentSamples;
  std::uint64_t seed = 0;
  std::optional<GenerationEvent> event;
  std::optional<std::filesystem::path> ledger;
  SettleMode settle_mode = SettleMode::kFull;
  std::int64_t sample_size = 0;
  // Paths as written by the user, keyed by "dataset", "baseline", "ledger".
  // Echoed instead of the resolved paths so reports do not depend on where
  // the run happened.
  std::map<std::string, std::string> written_paths;

  // Execution settings; not part of the echoed experiment description.
  int workers = 1;
  std::filesystem::path out = ".";
};

// Parses a JSON config document. Relative paths resolve against `base_dir`.
RunConfig ParseConfig(const nlohmann::json& doc,
                      const std::filesystem::path& base_dir);
RunConfig LoadConfigFile(const std::filesystem::path& path);

// The resolved experiment description echoed into report sidecars. Leaves
// out `workers` and `out` so reports are identical across executions.
nlohmann::json ResolvedConfigJson(const RunConfig& config);

SolverSpec MakeSolverSpec(const RunConfig& config);

// A game ready for the solvers, plus the density oracle behind it when the
// game comes from a dataset.
struct GameBundle {
  std::shared_ptr<const CoalitionUtility> utility;
  std::unique_ptr<CoalitionGame> game;
};

// Builds the game for `event` (ignored for explicit games). Throws
// ConfigError when neither a dataset nor an explicit game is configured.
GameBundle BuildGame(const RunConfig& config,
                     const std::optional<GenerationEvent>& event);

}  // namespace royalty::cli

#endif  // ROYALTY_TOOLS_RUN_CONFIG_H_
