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

#include "run_config.h"

#include <bit>
#include <fstream>

#include "royalty/error.h"
#include "royalty/random.h"

namespace royalty::cli {
namespace {

using nlohmann::json;

std::filesystem::path Resolve(const std::filesystem::path& base,
                              const std::string& p) {
  std::filesystem::path path(p);
  if (path.is_relative() && !base.empty()) path = base / path;
  return path.lexically_normal();
}

std::vector<double> NumberArray(const json& node, const char* what) {
  if (!node.is_array()) {
    throw ConfigError(std::string(what) + " must be an array of numbers");
  }
  std::vector<double> out;
  for (const json& v : node) {
    if (!v.is_number()) {
      throw ConfigError(std::string(what) + " must be an array of numbers");
    }
    out.push_back(v.get<double>());
  }
  return out;
}

GenerationEvent ParseEvent(const json& node) {
  GenerationEvent event;
  if (node.is_array()) {
    const auto x = NumberArray(node, "event");
    event.x = Eigen::Map<const Eigen::VectorXd>(x.data(),
                                                static_cast<Eigen::Index>(x.size()));
    return event;
  }
  if (!node.is_object() || !node.contains("x")) {
    throw ConfigError("event must be an array or an object with \"x\"");
  }
  const auto x = NumberArray(node.at("x"), "event.x");
  event.x = Eigen::Map<const Eigen::VectorXd>(x.data(),
                                              static_cast<Eigen::Index>(x.size()));
  if (node.contains("label") && !node.at("label").is_null()) {
    event.conditioning = node.at("label").get<std::string>();
  }
  return event;
}

OracleKind ParseOracleKind(const std::string& name) {
  if (name == "gaussian_mle") return OracleKind::kGaussianMle;
  if (name == "kde") return OracleKind::kKde;
  if (name == "latent_chain") return OracleKind::kLatentChain;
  throw ConfigError("unknown oracle kind '" + name + "'");
}

json EventJson(const GenerationEvent& event) {
  json x = json::array();
  for (Eigen::Index j = 0; j < event.x.size(); ++j) x.push_back(event.x(j));
  json out = {{"x", x}};
  out["label"] = event.conditioning ? json(*event.conditioning) : json(nullptr);
  return out;
}

}  // namespace

RunConfig ParseConfig(const json& doc, const std::filesystem::path& base_dir) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  RunConfig config;
  try {
    for (const auto& [key, value] : doc.items()) {
      if (key == "dataset") {
        config.written_paths["dataset"] = value.get<std::string>();
        config.dataset = Resolve(base_dir, config.written_paths["dataset"]);
      } else if (key == "baseline") {
        if (value.is_string() && value.get<std::string>() == "standard_normal") {
          config.baseline = BaselineKind::kStandardNormal;
        } else if (value.is_object() && value.contains("dataset")) {
          config.baseline = BaselineKind::kDataset;
          config.written_paths["baseline"] =
              value.at("dataset").get<std::string>();
          config.baseline_dataset =
              Resolve(base_dir, config.written_paths["baseline"]);
        } else {
          throw ConfigError(
              "baseline must be \"standard_normal\" or {\"dataset\": path}");
        }
      } else if (key == "oracle") {
        if (value.is_string()) {
          config.oracle.kind = ParseOracleKind(value.get<std::string>());
          continue;
        }
        for (const auto& [okey, ovalue] : value.items()) {
          if (okey == "kind") {
            config.oracle.kind = ParseOracleKind(ovalue.get<std::string>());
          } else if (okey == "ridge") {
            config.oracle.ridge = ovalue.get<double>();
          } else if (okey == "bandwidth") {
            config.oracle.kde_bandwidth = ovalue.get<double>();
          } else if (okey == "schedule") {
            config.oracle.schedule.alphas = NumberArray(ovalue, "schedule");
          } else {
            throw ConfigError("unknown oracle key '" + okey + "'");
          }
        }
      } else if (key == "game") {
        ExplicitGame game;
        if (value.contains("additive")) {
          game.additive_weights = NumberArray(value.at("additive"), "additive");
        } else if (value.contains("table")) {
          game.table = NumberArray(value.at("table"), "table");
        } else {
          throw ConfigError("game needs \"additive\" or \"table\"");
        }
        config.game = std::move(game);
      } else if (key == "solver") {
        const std::string kind = value.is_string()
                                     ? value.get<std::string>()
                                     : value.value("kind", std::string("exact"));
        if (kind == "exact") {
          config.solver = SolverKind::kExact;
        } else if (kind == "mc") {
          config.solver = SolverKind::kMonteCarlo;
        } else {
          throw ConfigError("solver must be exact or mc");
        }
        if (value.is_object()) {
          config.permutations = value.value("permutations", config.permutations);
          config.truncation = value.value("truncation", config.truncation);
        }
      } else if (key == "beta") {
        if (value.is_string() && value.get<std::string>() == "permission") {
          config.beta_permission = true;
          config.fixed_beta.reset();
        } else if (value.is_number()) {
          config.fixed_beta = value.get<double>();
          config.beta_permission = false;
        } else {
          throw ConfigError("beta must be \"permission\" or a number");
        }
      } else if (key == "density_mc_samples") {
        config.density_mc_samples = value.get<int>();
      } else if (key == "seed") {
        config.seed = value.get<std::uint64_t>();
      } else if (key == "event") {
        config.event = ParseEvent(value);
      } else if (key == "ledger") {
        config.written_paths["ledger"] = value.get<std::string>();
        config.ledger = Resolve(base_dir, config.written_paths["ledger"]);
      } else if (key == "settle") {
        const std::string mode = value.value("mode", std::string("full"));
        if (mode == "full") {
          config.settle_mode = SettleMode::kFull;
        } else if (mode == "sample") {
          config.settle_mode = SettleMode::kSample;
        } else {
          throw ConfigError("settle.mode must be full or sample");
        }
        config.sample_size = value.value("sample_size", std::int64_t{0});
      } else if (key == "workers") {
        config.workers = value.get<int>();
      } else if (key == "out") {
        config.out = Resolve(base_dir, value.get<std::string>());
      } else {
        throw ConfigError("unknown config key '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return config;
}

RunConfig LoadConfigFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
  return ParseConfig(doc, path.parent_path());
}

namespace {

json EchoPath(const RunConfig& config, const std::string& key,
              const std::filesystem::path& resolved) {
  const auto it = config.written_paths.find(key);
  return it != config.written_paths.end() ? json(it->second)
                                          : json(resolved.generic_string());
}

}  // namespace

json ResolvedConfigJson(const RunConfig& config) {
  json out;
  out["dataset"] = config.dataset ? EchoPath(config, "dataset", *config.dataset)
                                  : json(nullptr);
  out["baseline"] =
      config.baseline == BaselineKind::kStandardNormal
          ? json("standard_normal")
          : json({{"dataset",
                   EchoPath(config, "baseline", config.baseline_dataset)}});
  json oracle = {{"kind", std::string(OracleKindName(config.oracle.kind))},
                 {"ridge", config.oracle.ridge}};
  oracle["bandwidth"] = config.oracle.kde_bandwidth
                            ? json(*config.oracle.kde_bandwidth)
                            : json("scott");
  oracle["schedule"] = config.oracle.schedule.alphas;
  out["oracle"] = oracle;
  if (config.game) {
    out["game"] = config.game->table.empty()
                      ? json({{"additive", config.game->additive_weights}})
                      : json({{"table", config.game->table}});
  }
  out["solver"] = {
      {"kind", config.solver == SolverKind::kExact ? "exact" : "mc"},
      {"permutations", config.permutations},
      {"truncation", config.truncation}};
  if (config.beta_permission) {
    out["beta"] = "permission";
  } else if (config.fixed_beta) {
    out["beta"] = *config.fixed_beta;
  } else {
    out["beta"] = nullptr;
  }
  out["density_mc_samples"] = config.density_mc_samples;
  out["seed"] = config.seed;
  out["event"] = config.event ? EventJson(*config.event) : json(nullptr);
  out["ledger"] = config.ledger ? EchoPath(config, "ledger", *config.ledger)
                                : json(nullptr);
  out["settle"] = {
      {"mode", config.settle_mode == SettleMode::kFull ? "full" : "sample"},
      {"sample_size", config.sample_size}};
  return out;
}

SolverSpec MakeSolverSpec(const RunConfig& config) {
  if (config.solver == SolverKind::kExact) {
    return SolverSpec::Exact(config.workers);
  }
  EstimatorConfig mc;
  mc.num_permutations = config.permutations;
  mc.seed = DeriveStream(config.seed, "mc_solver");
  mc.truncation_tolerance = config.truncation;
  mc.workers = config.workers;
  return SolverSpec::MonteCarlo(mc);
}

GameBundle BuildGame(const RunConfig& config,
                     const std::optional<GenerationEvent>& event) {
  GameBundle bundle;
  if (config.game) {
    const ExplicitGame& g = *config.game;
    if (!g.additive_weights.empty()) {
      const std::vector<double> weights = g.additive_weights;
      if (weights.size() > static_cast<std::size_t>(kMaxPlayers)) {
        throw ConfigError("too many additive players");
      }
      bundle.game = std::make_unique<CoalitionGame>(
          static_cast<int>(weights.size()), [weights](Coalition s) {
            double total = 0.0;
            for (const PlayerId i : s.Members()) {
              total += weights[static_cast<std::size_t>(i)];
            }
            return total;
          });
      return bundle;
    }
    const std::vector<double> table = g.table;
    if (table.empty() || !std::has_single_bit(table.size()) ||
        table.size() > (std::size_t{1} << 30)) {
      throw ConfigError("game table length must be a power of two");
    }
    const int n = std::countr_zero(table.size());
    bundle.game = std::make_unique<CoalitionGame>(n, [table](Coalition s) {
      return table[static_cast<std::size_t>(s.bits())];
    });
    return bundle;
  }

  if (!config.dataset) {
    throw ConfigError("no dataset or explicit game configured");
  }
  if (!event) throw ConfigError("no generation event given (--event)");
  Partition partition;
  DensityModel baseline = DensityModel::StandardNormal(1);
  try {
    partition = ReadDatasetCsv(*config.dataset);
    const int d = ValidatePartition(partition);
    if (config.baseline == BaselineKind::kStandardNormal) {
      baseline = DensityModel::StandardNormal(d);
    } else {
      Partition public_data = ReadDatasetCsv(config.baseline_dataset);
      std::vector<Point> pooled;
      for (const OwnerDataset& owner : public_data) {
        pooled.insert(pooled.end(), owner.points.begin(), owner.points.end());
      }
      baseline = config.oracle.kind == OracleKind::kKde
                     ? FitKde(pooled, config.oracle.kde_bandwidth)
                     : FitGaussian(pooled, config.oracle.ridge);
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kOracleFailure) throw;
    throw ConfigError(e.what());
  }
  OracleConfig oracle = config.oracle;
  oracle.latent_samples = config.density_mc_samples;
  oracle.latent_seed = DeriveStream(config.seed, "latent");
  try {
    bundle.utility = std::make_shared<const CoalitionUtility>(
        std::move(partition), std::move(baseline), *event, oracle);
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  bundle.game = std::make_unique<CoalitionGame>(bundle.utility->n(),
                                                MakeOracle(bundle.utility));
  return bundle;
}

}  // namespace royalty::cli
