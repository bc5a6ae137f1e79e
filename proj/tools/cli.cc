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

#include "cli.h"

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "royalty/error.h"
#include "royalty/ledger.h"
#include "royalty/numeric.h"
#include "royalty/permission_game.h"
#include "royalty/random.h"
#include "royalty/shapley_exact.h"
#include "royalty/srs.h"
#include "royalty/synthetic.h"
#include "run_config.h"

namespace royalty::cli {
namespace {

using nlohmann::json;

// Raw flag values; applied on top of the config file.
struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string solver;
  std::optional<int> permutations;
  std::string beta;
  std::string out;
  std::optional<int> workers;
  std::string event;
  std::optional<std::string> label;
  std::string dataset;
  std::string ledger;
  std::string mode;
  std::optional<std::int64_t> sample_size;
  // simulate
  std::string scenario = "ranking";
  int points = 50;
  int transactions = 20;
};

void AddCommonFlags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "JSON run configuration");
  cmd->add_option("--seed", f.seed, "Root seed for every random stream");
  cmd->add_option("--solver", f.solver, "exact | mc")
      ->check(CLI::IsMember({"exact", "mc"}));
  cmd->add_option("--permutations", f.permutations,
                  "Permutations for the mc solver");
  cmd->add_option("--beta", f.beta, "permission | FLOAT in [0, 1]");
  cmd->add_option("--out", f.out, "Output directory");
  cmd->add_option("--workers", f.workers, "Worker threads (results do not depend on it)");
  cmd->add_option("--dataset", f.dataset, "Owner dataset CSV");
}

void AddEventFlags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--event", f.event, "Generated sample, e.g. \"30.1,0.4\"");
  cmd->add_option("--label", f.label, "Conditioning label of the event");
}

RunConfig Resolve(const Flags& f) {
  RunConfig config;
  if (!f.config.empty()) config = LoadConfigFile(f.config);
  if (f.seed) config.seed = *f.seed;
  if (!f.solver.empty()) {
    config.solver = f.solver == "mc" ? SolverKind::kMonteCarlo
                                     : SolverKind::kExact;
  }
  if (f.permutations) config.permutations = *f.permutations;
  if (!f.beta.empty()) {
    if (f.beta == "permission") {
      config.beta_permission = true;
      config.fixed_beta.reset();
    } else {
      try {
        config.fixed_beta = ParseDouble(f.beta);
      } catch (const Error&) {
        throw ConfigError("--beta must be 'permission' or a number");
      }
      config.beta_permission = false;
    }
  }
  if (config.fixed_beta &&
      !(*config.fixed_beta >= 0.0 && *config.fixed_beta <= 1.0)) {
    throw ConfigError("beta must lie in [0, 1]");
  }
  if (!f.out.empty()) config.out = f.out;
  if (f.workers) config.workers = *f.workers;
  if (!f.dataset.empty()) {
    config.dataset = std::filesystem::path(f.dataset);
    config.written_paths["dataset"] = f.dataset;
  }
  if (!f.event.empty()) {
    GenerationEvent event;
    try {
      event.x = ParsePoint(f.event);
    } catch (const Error&) {
      throw ConfigError("--event must be comma separated numbers");
    }
    config.event = std::move(event);
  }
  if (f.label && config.event) config.event->conditioning = *f.label;
  if (!f.ledger.empty()) {
    config.ledger = std::filesystem::path(f.ledger);
    config.written_paths["ledger"] = f.ledger;
  }
  if (!f.mode.empty()) {
    if (f.mode == "full") {
      config.settle_mode = SettleMode::kFull;
    } else if (f.mode == "sample") {
      config.settle_mode = SettleMode::kSample;
    } else {
      throw ConfigError("--mode must be full or sample");
    }
  }
  if (f.sample_size) config.sample_size = *f.sample_size;
  if (config.workers < 1) throw ConfigError("--workers must be >= 1");
  if (config.permutations < 1) throw ConfigError("permutations must be >= 1");
  if (config.density_mc_samples < 1) {
    throw ConfigError("density_mc_samples must be >= 1");
  }
  return config;
}

void EnsureOutDir(const RunConfig& config) {
  std::error_code ec;
  std::filesystem::create_directories(config.out, ec);
  if (ec) {
    throw Error(ErrorCode::kStorageFailure,
                "cannot create output directory " + config.out.string());
  }
}

void WriteFile(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
  out.flush();
  if (!out) {
    throw Error(ErrorCode::kStorageFailure, "cannot write " + path.string());
  }
}

json BaseMeta(const std::string& command, const RunConfig& config) {
  return json{{"command", command},
              {"config", ResolvedConfigJson(config)},
              {"units", "nats"}};
}

json FallbackJson(const GameBundle& bundle) {
  json list = json::array();
  if (bundle.utility) {
    for (const Coalition c : bundle.utility->fallback_coalitions()) {
      list.push_back(c.ToString());
    }
  }
  return list;
}

std::string Cell(double v) { return FormatDouble(v); }

int CmdAttribute(const RunConfig& config, std::ostream& out) {
  GameBundle bundle = BuildGame(config, config.event);
  const SrsResult result = SrsFromGame(*bundle.game, MakeSolverSpec(config));
  const LooVector loo = LooScores(*bundle.game);
  const int n = bundle.game->n();

  std::ostringstream csv;
  csv << "owner_id,phi,stderr,srs,loo\n";
  for (int i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    csv << i << ',' << Cell(result.attribution.phi.values[k]) << ','
        << (result.attribution.std_errors
                ? Cell((*result.attribution.std_errors)[k])
                : std::string())
        << ',' << Cell(result.srs.shares[k]) << ',' << Cell(loo.values[k])
        << '\n';
  }
  const double grand = bundle.game->Evaluate(Coalition::Grand(n));
  json meta = BaseMeta("attribute", config);
  meta["solver"] = result.attribution.solver;
  meta["degenerate"] = result.srs.degenerate;
  meta["fallback_coalitions"] = FallbackJson(bundle);
  meta["grand_utility"] = grand;
  meta["grand_utility_bits"] = NatsToBits(grand);

  EnsureOutDir(config);
  WriteFile(config.out / "attribution.csv", csv.str());
  WriteFile(config.out / "attribution.meta.json", meta.dump(2) + "\n");
  out << csv.str();
  if (result.srs.degenerate) {
    out << "# degenerate: no owner has positive Shapley value; shares are "
           "uniform\n";
  }
  return kExitOk;
}

int CmdCompareLoo(const RunConfig& config, std::ostream& out) {
  GameBundle bundle = BuildGame(config, config.event);
  const SrsResult result = SrsFromGame(*bundle.game, MakeSolverSpec(config));
  const LooVector loo = LooScores(*bundle.game);
  std::ostringstream csv;
  csv << "owner_id,phi,loo,srs\n";
  for (int i = 0; i < bundle.game->n(); ++i) {
    const auto k = static_cast<std::size_t>(i);
    csv << i << ',' << Cell(result.attribution.phi.values[k]) << ','
        << Cell(loo.values[k]) << ',' << Cell(result.srs.shares[k]) << '\n';
  }
  json meta = BaseMeta("compare-loo", config);
  meta["solver"] = result.attribution.solver;
  meta["degenerate"] = result.srs.degenerate;
  meta["fallback_coalitions"] = FallbackJson(bundle);
  EnsureOutDir(config);
  WriteFile(config.out / "compare_loo.csv", csv.str());
  WriteFile(config.out / "compare_loo.meta.json", meta.dump(2) + "\n");
  out << csv.str();
  return kExitOk;
}

int CmdDeveloperShare(const RunConfig& config, std::ostream& out) {
  if (config.fixed_beta) {
    throw ConfigError(
        "developer-share derives beta from the permission game; a fixed "
        "--beta was given");
  }
  GameBundle bundle = BuildGame(config, config.event);
  const SolverSpec solver = MakeSolverSpec(config);
  const PermissionGame pg(*bundle.game);
  const ShapleyVector phi = PermissionShapley(pg, solver);
  const SrsVector srs = Srs(phi);
  const DeveloperSplit split = ComputeDeveloperSplit(pg, solver);
  const int n = pg.owner_count();

  std::ostringstream csv;
  csv << "player,phi,srs,payout_fraction\n";
  for (int i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    csv << i << ',' << Cell(phi.values[k]) << ',' << Cell(srs.shares[k])
        << ',' << Cell(split.owner_payout_fractions[k]) << '\n';
  }
  const auto dev = static_cast<std::size_t>(n);
  csv << "developer," << Cell(phi.values[dev]) << ',' << Cell(srs.shares[dev])
      << ',' << Cell(split.developer_share) << '\n';

  json meta = BaseMeta("developer-share", config);
  meta["beta_data"] = split.beta_data;
  meta["developer_share"] = split.developer_share;
  meta["degenerate"] = srs.degenerate;
  meta["fallback_coalitions"] = FallbackJson(bundle);
  EnsureOutDir(config);
  WriteFile(config.out / "developer_share.csv", csv.str());
  WriteFile(config.out / "developer_share.meta.json", meta.dump(2) + "\n");
  out << csv.str();
  out << "# beta_data=" << Cell(split.beta_data) << '\n';
  return kExitOk;
}

int CmdSettle(const RunConfig& config, std::ostream& out) {
  if (!config.ledger) throw ConfigError("settle needs --ledger");
  if (config.beta_permission) {
    throw ConfigError(
        "settle needs a fixed --beta; run developer-share to derive one");
  }
  const double beta = config.fixed_beta.value_or(1.0);

  std::optional<int> owners;
  const bool can_attribute = config.dataset.has_value() || config.game;
  if (config.game) {
    owners = BuildGame(config, std::nullopt).game->n();
  } else if (config.dataset) {
    try {
      owners = static_cast<int>(ReadDatasetCsv(*config.dataset).size());
    } catch (const Error& e) {
      throw ConfigError(e.what());
    }
  }
  std::error_code ec;
  if (!std::filesystem::is_regular_file(*config.ledger, ec)) {
    throw Error(ErrorCode::kStorageFailure,
                "cannot read ledger " + config.ledger->string());
  }
  auto store = LedgerStore::Open(*config.ledger, owners);

  Attributor attributor;
  const SolverSpec solver = MakeSolverSpec(config);
  if (can_attribute) {
    attributor = [&](const Transaction& tx) {
      GameBundle bundle = BuildGame(config, tx.event);
      return SrsFromGame(*bundle.game, solver).srs;
    };
  }

  SettlementReport report;
  if (config.settle_mode == SettleMode::kFull) {
    report = store->SettleFull(beta, attributor);
  } else {
    if (config.sample_size < 1 ||
        config.sample_size >
            static_cast<std::int64_t>(store->unsettled_count())) {
      throw ConfigError("--sample-size must be in [1, " +
                        std::to_string(store->unsettled_count()) + "]");
    }
    report = store->SettleSubsampled(beta, attributor, config.sample_size,
                                     DeriveStream(config.seed, "settlement"));
  }
  EnsureOutDir(config);
  WriteSettlementCsv(config.out / "settlement.csv", report);

  CompensatedSum paid;
  for (const double p : report.owner_payouts) paid.Add(p);
  paid.Add(report.developer_payout);
  const double rel_err = std::abs(paid.value() - report.total_income) /
                         std::max(1.0, std::abs(report.total_income));
  out << FormatSettlementCsv(report);
  out << "# conservation: paid=" << Cell(paid.value())
      << " income=" << Cell(report.total_income)
      << " relative_error=" << Cell(rel_err)
      << (rel_err <= 1e-9 ? " OK" : " VIOLATED") << '\n';
  out << "# settled=" << report.settled_count
      << " quarantined=" << report.quarantined_ids.size() << '\n';
  if (report.price_share_correlation) {
    out << "# warning: prices correlate with shares; the subsampled "
           "estimate may be biased\n";
  }
  return kExitOk;
}

int CmdSimulate(const RunConfig& config, const Flags& flags,
                std::ostream& out) {
  Scenario scenario;
  try {
    scenario = ParseScenario(flags.scenario);
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  if (flags.points < 1) throw ConfigError("--points must be >= 1");
  if (flags.transactions < 0) throw ConfigError("--transactions must be >= 0");
  const std::uint64_t seed = DeriveStream(config.seed, "simulate");
  const SyntheticSetup setup = MakeSetup(scenario, seed, flags.points);

  EnsureOutDir(config);
  WriteDatasetCsv(config.out / "dataset.csv", setup.partition);

  const GenerationEvent target = SampleTarget(setup, seed, 0);
  json event = {{"x", std::vector<double>(target.x.data(),
                                          target.x.data() + target.x.size())}};
  json doc = {{"dataset", "dataset.csv"},
              {"baseline", "standard_normal"},
              {"oracle", {{"kind", "gaussian_mle"}}},
              {"solver", {{"kind", "exact"}}},
              {"seed", config.seed},
              {"event", event},
              {"ledger", "ledger.log"}};
  WriteFile(config.out / "config.json", doc.dump(2) + "\n");

  const auto ledger_path = config.out / "ledger.log";
  std::filesystem::remove(ledger_path);
  std::filesystem::remove(ledger_path.string() + ".balances");
  std::ostringstream lines;
  for (int t = 0; t < flags.transactions; ++t) {
    Transaction tx;
    tx.id = "gen" + std::to_string(t);
    tx.price = 1.0;
    tx.event = SampleTarget(setup, seed, t + 1);
    lines << FormatTransactionLine(tx) << '\n';
  }
  WriteFile(ledger_path, lines.str());

  out << "scenario=" << ScenarioName(scenario)
      << " owners=" << setup.partition.size() << " points=" << flags.points
      << " transactions=" << flags.transactions << '\n';
  out << "wrote " << (config.out / "dataset.csv").string() << ", "
      << (config.out / "config.json").string() << ", "
      << ledger_path.string() << '\n';
  return kExitOk;
}

int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kOracleFailure:
    case ErrorCode::kNonFinite:
    case ErrorCode::kEmptyDataset:
      return kExitOracle;
    case ErrorCode::kStorageFailure:
    case ErrorCode::kDuplicateId:
      return kExitStorage;
    default:
      return kExitConfig;
  }
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Shapley royalty attribution and settlement"};
  app.name("royalty");
  app.require_subcommand(1);
  Flags flags;

  CLI::App* attribute =
      app.add_subcommand("attribute", "Shapley values, royalty shares and LOO for one event");
  AddCommonFlags(attribute, flags);
  AddEventFlags(attribute, flags);

  CLI::App* developer = app.add_subcommand(
      "developer-share", "Price the AI developer with the permission game");
  AddCommonFlags(developer, flags);
  AddEventFlags(developer, flags);

  CLI::App* settle =
      app.add_subcommand("settle", "Settle unsettled ledger transactions");
  AddCommonFlags(settle, flags);
  settle->add_option("--ledger", flags.ledger, "Ledger log path");
  settle->add_option("--mode", flags.mode, "full | sample");
  settle->add_option("--sample-size", flags.sample_size,
                     "Transactions to attribute in sample mode");

  CLI::App* compare =
      app.add_subcommand("compare-loo", "Shapley values next to LOO scores");
  AddCommonFlags(compare, flags);
  AddEventFlags(compare, flags);

  CLI::App* simulate = app.add_subcommand(
      "simulate", "Write synthetic owner clusters, a config and a ledger");
  AddCommonFlags(simulate, flags);
  simulate->add_option("--scenario", flags.scenario,
                       "ranking | irrelevant | duplicate");
  simulate->add_option("--points", flags.points, "Points per owner");
  simulate->add_option("--transactions", flags.transactions,
                       "Ledger transactions to generate");

  std::vector<std::string> argv_storage{"royalty"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const std::string& a : argv_storage) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "royalty: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    const RunConfig config = Resolve(flags);
    if (attribute->parsed()) return CmdAttribute(config, out);
    if (developer->parsed()) return CmdDeveloperShare(config, out);
    if (settle->parsed()) return CmdSettle(config, out);
    if (compare->parsed()) return CmdCompareLoo(config, out);
    if (simulate->parsed()) return CmdSimulate(config, flags, out);
  } catch (const ConfigError& e) {
    err << "royalty: config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const Error& e) {
    err << "royalty: " << e.what() << '\n';
    return ExitCodeFor(e.code());
  } catch (const std::filesystem::filesystem_error& e) {
    err << "royalty: " << e.what() << '\n';
    return kExitStorage;
  }
  return kExitConfig;
}

}  // namespace royalty::cli
