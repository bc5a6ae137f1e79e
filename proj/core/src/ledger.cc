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

#include "royalty/ledger.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "royalty/error.h"
#include "royalty/numeric.h"
#include "royalty/random.h"

namespace royalty {
namespace {

std::filesystem::path BalancesPath(const std::filesystem::path& log) {
  std::filesystem::path p = log;
  p += ".balances";
  return p;
}

void CheckShares(const SrsVector& srs, int owner_count,
                 const std::string& id) {
  if (owner_count > 0 && static_cast<int>(srs.shares.size()) != owner_count) {
    throw Error(ErrorCode::kInvalidArgument,
                "transaction " + id + " has " +
                    std::to_string(srs.shares.size()) + " shares, expected " +
                    std::to_string(owner_count));
  }
  for (const double s : srs.shares) {
    if (!(s >= 0.0 && s <= 1.0)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "transaction " + id + " has a share outside [0, 1]");
    }
  }
}

// Pearson correlation test between price and every owner's share. Constant
// prices never trigger.
bool PriceShareCorrelated(const std::vector<double>& prices,
                          const std::vector<const SrsVector*>& rows,
                          int owner_count) {
  const std::size_t k = prices.size();
  if (k < 3) return false;
  const auto [lo, hi] = std::minmax_element(prices.begin(), prices.end());
  if (*lo == *hi) return false;
  const double kd = static_cast<double>(k);
  const double price_mean =
      std::accumulate(prices.begin(), prices.end(), 0.0) / kd;
  double price_var = 0.0;
  for (const double p : prices) price_var += (p - price_mean) * (p - price_mean);
  const double threshold = 3.0 / std::sqrt(kd);
  for (int i = 0; i < owner_count; ++i) {
    double share_mean = 0.0;
    for (const SrsVector* row : rows) share_mean += row->shares[i];
    share_mean /= kd;
    double cov = 0.0, share_var = 0.0;
    for (std::size_t t = 0; t < k; ++t) {
      const double ds = rows[t]->shares[i] - share_mean;
      cov += (prices[t] - price_mean) * ds;
      share_var += ds * ds;
    }
    if (share_var <= 0.0) continue;
    if (std::abs(cov / std::sqrt(price_var * share_var)) > threshold) {
      return true;
    }
  }
  return false;
}

std::string FormatEventRef(const GenerationEvent& event) {
  std::string out;
  if (event.conditioning) out = *event.conditioning + "@";
  for (Eigen::Index j = 0; j < event.x.size(); ++j) {
    if (j > 0) out += ';';
    out += FormatDouble(event.x(j));
  }
  return out;
}

GenerationEvent ParseEventRef(std::string_view text) {
  GenerationEvent event;
  if (const auto at = text.find('@'); at != std::string_view::npos) {
    event.conditioning = std::string(text.substr(0, at));
    text.remove_prefix(at + 1);
  }
  if (text.empty()) {
    event.x = Point(0);
    return event;
  }
  const auto fields = SplitFields(text, ';');
  event.x = Point(static_cast<Eigen::Index>(fields.size()));
  for (std::size_t j = 0; j < fields.size(); ++j) {
    event.x(static_cast<Eigen::Index>(j)) = ParseDouble(fields[j]);
  }
  return event;
}

}  // namespace

std::string_view SettlementEstimatorName(SettlementEstimator estimator) {
  return estimator == SettlementEstimator::kFull ? "full" : "subsampled";
}

std::string FormatTransactionLine(const Transaction& tx) {
  std::string line = tx.id + "|" + FormatDouble(tx.price) + "|" +
                     FormatEventRef(tx.event) + "|";
  if (tx.srs) {
    if (tx.srs->degenerate) line += '~';
    for (std::size_t i = 0; i < tx.srs->shares.size(); ++i) {
      if (i > 0) line += ',';
      line += FormatDouble(tx.srs->shares[i]);
    }
  }
  line += tx.settled ? "|1" : "|0";
  return line;
}

Transaction ParseTransactionLine(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  const auto fields = SplitFields(line, '|');
  if (fields.size() != 5) {
    throw Error(ErrorCode::kParseError,
                "ledger line needs 5 '|' separated fields: '" +
                    std::string(line) + "'");
  }
  Transaction tx;
  tx.id = std::string(fields[0]);
  if (tx.id.empty()) throw Error(ErrorCode::kParseError, "empty id");
  tx.price = ParseDouble(fields[1]);
  tx.event = ParseEventRef(fields[2]);
  std::string_view shares = fields[3];
  if (!shares.empty()) {
    SrsVector srs;
    if (shares.front() == '~') {
      srs.degenerate = true;
      shares.remove_prefix(1);
    }
    for (const auto field : SplitFields(shares, ',')) {
      srs.shares.push_back(ParseDouble(field));
    }
    tx.srs = std::move(srs);
  }
  if (fields[4] == "1") {
    tx.settled = true;
  } else if (fields[4] != "0") {
    throw Error(ErrorCode::kParseError, "settled flag must be 0 or 1");
  }
  return tx;
}

LedgerStore::LedgerStore(int owner_count) : LedgerStore(owner_count, {}) {
  if (owner_count < 1) {
    throw Error(ErrorCode::kInvalidArgument, "ledger needs at least one owner");
  }
}

LedgerStore::LedgerStore(int owner_count,
                         std::optional<std::filesystem::path> path)
    : owner_count_(owner_count),
      path_(std::move(path)),
      owner_balances_(static_cast<std::size_t>(std::max(owner_count, 0)),
                      0.0) {}

std::unique_ptr<LedgerStore> LedgerStore::Open(
    const std::filesystem::path& log_path, std::optional<int> owner_count) {
  std::vector<Transaction> replayed;
  std::unordered_set<std::string> ids;
  std::error_code ec;
  if (std::filesystem::exists(log_path, ec)) {
    std::ifstream in(log_path);
    if (!in) {
      throw Error(ErrorCode::kStorageFailure,
                  "cannot read ledger " + log_path.string());
    }
    std::unordered_map<std::string, std::size_t> position;
    std::string line;
    int line_number = 0;
    while (std::getline(in, line)) {
      ++line_number;
      if (line.empty()) continue;
      Transaction tx;
      try {
        tx = ParseTransactionLine(line);
      } catch (const Error& e) {
        throw Error(ErrorCode::kStorageFailure,
                    log_path.string() + ":" + std::to_string(line_number) +
                        ": " + e.what());
      }
      if (auto it = position.find(tx.id); it != position.end()) {
        if (!tx.settled) {
          throw Error(ErrorCode::kStorageFailure,
                      log_path.string() + ":" + std::to_string(line_number) +
                          ": duplicate unsettled record " + tx.id);
        }
        replayed[it->second] = std::move(tx);
        continue;
      }
      position.emplace(tx.id, replayed.size());
      replayed.push_back(std::move(tx));
    }
    if (in.bad()) {
      throw Error(ErrorCode::kStorageFailure,
                  "error reading ledger " + log_path.string());
    }
  } else if (ec) {
    throw Error(ErrorCode::kStorageFailure,
                "cannot stat ledger " + log_path.string());
  }

  std::optional<int> snapshot_owners;
  std::vector<double> balances;
  double developer = 0.0;
  std::int64_t settlements = 0;
  const auto balances_path = BalancesPath(log_path);
  if (std::filesystem::exists(balances_path, ec)) {
    std::ifstream in(balances_path);
    if (!in) {
      throw Error(ErrorCode::kStorageFailure,
                  "cannot read " + balances_path.string());
    }
    std::string line;
    try {
      while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line.rfind("owners=", 0) == 0) {
          snapshot_owners =
              static_cast<int>(ParseDouble(std::string_view(line).substr(7)));
        } else if (line.rfind("settlements=", 0) == 0) {
          settlements = static_cast<std::int64_t>(
              ParseDouble(std::string_view(line).substr(12)));
        } else {
          const auto fields = SplitFields(line, ',');
          if (fields.size() == 3 && fields[0] == "owner") {
            balances.push_back(ParseDouble(fields[2]));
          } else if (fields.size() == 2 && fields[0] == "developer") {
            developer = ParseDouble(fields[1]);
          } else {
            throw Error(ErrorCode::kParseError, "bad line '" + line + "'");
          }
        }
      }
    } catch (const Error& e) {
      throw Error(ErrorCode::kStorageFailure,
                  balances_path.string() + ": " + e.what());
    }
    if (!snapshot_owners ||
        static_cast<int>(balances.size()) != *snapshot_owners) {
      throw Error(ErrorCode::kStorageFailure,
                  balances_path.string() + ": owner count mismatch");
    }
  }

  int owners = 0;
  if (snapshot_owners) {
    owners = *snapshot_owners;
  } else {
    for (const Transaction& tx : replayed) {
      if (tx.srs) {
        owners = static_cast<int>(tx.srs->shares.size());
        break;
      }
    }
    if (owners == 0 && owner_count) owners = *owner_count;
  }
  if (owner_count && owners != *owner_count && owners != 0) {
    throw Error(ErrorCode::kStorageFailure,
                "ledger has " + std::to_string(owners) +
                    " owners, caller expects " + std::to_string(*owner_count));
  }

  auto store = std::unique_ptr<LedgerStore>(new LedgerStore(owners, log_path));
  for (Transaction& tx : replayed) {
    if (tx.srs) {
      try {
        CheckShares(*tx.srs, owners, tx.id);
      } catch (const Error& e) {
        throw Error(ErrorCode::kStorageFailure, e.what());
      }
    }
    store->ids_.insert(tx.id);
    store->transactions_.push_back(std::move(tx));
  }
  if (!balances.empty()) store->owner_balances_ = std::move(balances);
  store->developer_balance_ = developer;
  store->settlements_ = settlements;
  return store;
}

void LedgerStore::Record(Transaction tx) {
  if (tx.id.empty() || tx.id.find_first_of("|\n\r") != std::string::npos) {
    throw Error(ErrorCode::kInvalidArgument,
                "transaction id must be nonempty without '|' or newlines");
  }
  if (!(tx.price >= 0.0) || !std::isfinite(tx.price)) {
    throw Error(ErrorCode::kInvalidArgument,
                "transaction " + tx.id + " has an invalid price");
  }
  if (tx.event.conditioning &&
      tx.event.conditioning->find_first_of("|@\n\r") != std::string::npos) {
    throw Error(ErrorCode::kInvalidArgument,
                "conditioning label may not contain '|', '@' or newlines");
  }
  tx.settled = false;
  std::lock_guard lock(mu_);
  if (ids_.contains(tx.id)) {
    throw Error(ErrorCode::kDuplicateId, "transaction " + tx.id);
  }
  if (tx.srs) {
    CheckShares(*tx.srs, owner_count_, tx.id);
    if (owner_count_ == 0) {
      owner_count_ = static_cast<int>(tx.srs->shares.size());
      owner_balances_.assign(static_cast<std::size_t>(owner_count_), 0.0);
    }
  }
  if (path_) AppendLines({FormatTransactionLine(tx)});
  ids_.insert(tx.id);
  transactions_.push_back(std::move(tx));
}

void LedgerStore::AppendLines(const std::vector<std::string>& lines) {
  std::ofstream out(*path_, std::ios::binary | std::ios::app);
  for (const std::string& line : lines) out << line << '\n';
  out.flush();
  if (!out) {
    throw Error(ErrorCode::kStorageFailure,
                "cannot append to ledger " + path_->string());
  }
}

void LedgerStore::WriteBalances() const {
  const auto target = BalancesPath(*path_);
  auto temp = target;
  temp += ".tmp";
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    out << "owners=" << owner_count_ << '\n';
    out << "settlements=" << settlements_ << '\n';
    for (int i = 0; i < owner_count_; ++i) {
      out << "owner," << i << ','
          << FormatDouble(owner_balances_[static_cast<std::size_t>(i)])
          << '\n';
    }
    out << "developer," << FormatDouble(developer_balance_) << '\n';
    out.flush();
    if (!out) {
      throw Error(ErrorCode::kStorageFailure,
                  "cannot write " + temp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(temp, target, ec);
  if (ec) {
    throw Error(ErrorCode::kStorageFailure,
                "cannot replace " + target.string() + ": " + ec.message());
  }
}

void LedgerStore::CheckBeta(double beta_data) const {
  if (!(beta_data >= 0.0 && beta_data <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "beta_data must be in [0, 1]");
  }
}

std::vector<LedgerStore::Pending> LedgerStore::SnapshotUnsettled() const {
  std::lock_guard lock(mu_);
  std::vector<Pending> pending;
  for (std::size_t i = 0; i < transactions_.size(); ++i) {
    if (!transactions_[i].settled) pending.push_back({i, transactions_[i]});
  }
  return pending;
}

std::optional<SrsVector> LedgerStore::AttributeOne(
    const Transaction& tx, const Attributor& attributor) const {
  if (tx.srs) return tx.srs;
  if (!attributor) return std::nullopt;
  try {
    SrsVector srs = attributor(tx);
    CheckShares(srs, owner_count_, tx.id);
    if (static_cast<int>(srs.shares.size()) != owner_count_) {
      return std::nullopt;
    }
    return srs;
  } catch (const Error&) {
    return std::nullopt;
  }
}

SettlementReport LedgerStore::SettleFull(double beta_data,
                                         const Attributor& attributor) {
  CheckBeta(beta_data);
  std::lock_guard settle_lock(settle_mu_);
  std::vector<Pending> pending = SnapshotUnsettled();
  const auto n = static_cast<std::size_t>(owner_count_);

  SettlementReport report;
  report.estimator = SettlementEstimator::kFull;
  report.sampled_fraction = 1.0;
  std::vector<CompensatedSum> owner_sums(n);
  CompensatedSum income;
  std::vector<Pending> settled;
  std::vector<double> prices;
  std::vector<const SrsVector*> rows;
  for (Pending& p : pending) {
    std::optional<SrsVector> srs = AttributeOne(p.tx, attributor);
    if (!srs) {
      report.quarantined_ids.push_back(p.tx.id);
      continue;
    }
    p.tx.srs = std::move(srs);
    settled.push_back(std::move(p));
  }
  for (const Pending& p : settled) {
    income.Add(p.tx.price);
    for (std::size_t i = 0; i < n; ++i) {
      owner_sums[i].Add(p.tx.price * p.tx.srs->shares[i]);
    }
    prices.push_back(p.tx.price);
    rows.push_back(&*p.tx.srs);
  }
  report.total_income = income.value();
  report.owner_payouts.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    report.owner_payouts[i] = beta_data * owner_sums[i].value();
  }
  report.developer_payout = (1.0 - beta_data) * report.total_income;
  report.settled_count = static_cast<std::int64_t>(settled.size());
  report.price_share_correlation =
      PriceShareCorrelated(prices, rows, owner_count_);
  Commit(settled, report.quarantined_ids, report);
  return report;
}

SettlementReport LedgerStore::SettleSubsampled(double beta_data,
                                               const Attributor& attributor,
                                               std::int64_t sample_size,
                                               std::uint64_t seed) {
  CheckBeta(beta_data);
  std::lock_guard settle_lock(settle_mu_);
  std::vector<Pending> pending = SnapshotUnsettled();
  const auto population = static_cast<std::int64_t>(pending.size());
  if (sample_size < 1 || sample_size > population) {
    throw Error(ErrorCode::kInvalidArgument,
                "sample size " + std::to_string(sample_size) +
                    " must be in [1, " + std::to_string(population) + "]");
  }
  const auto n = static_cast<std::size_t>(owner_count_);

  // Partial Fisher-Yates; the chosen positions are then visited in ledger
  // order so a full-population sample sums exactly like SettleFull.
  std::vector<std::size_t> order(pending.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  for (std::int64_t k = 0; k < sample_size; ++k) {
    const auto remaining = static_cast<std::uint64_t>(population - k);
    const auto j = static_cast<std::size_t>(k) +
                   static_cast<std::size_t>(rng.UniformBelow(remaining));
    std::swap(order[static_cast<std::size_t>(k)], order[j]);
  }
  order.resize(static_cast<std::size_t>(sample_size));
  std::sort(order.begin(), order.end());

  SettlementReport report;
  report.estimator = SettlementEstimator::kSubsampled;
  report.seed = seed;
  std::vector<bool> quarantined(pending.size(), false);
  std::vector<CompensatedSum> share_sums(n);
  std::vector<CompensatedSum> weighted_sums(n);
  std::vector<double> prices;
  std::vector<const SrsVector*> rows;
  std::int64_t attributed = 0;
  for (const std::size_t k : order) {
    Pending& p = pending[k];
    std::optional<SrsVector> srs = AttributeOne(p.tx, attributor);
    if (!srs) {
      quarantined[k] = true;
      report.quarantined_ids.push_back(p.tx.id);
      continue;
    }
    p.tx.srs = std::move(srs);
    ++attributed;
  }
  for (const std::size_t k : order) {
    if (quarantined[k]) continue;
    const Transaction& tx = pending[k].tx;
    for (std::size_t i = 0; i < n; ++i) {
      share_sums[i].Add(tx.srs->shares[i]);
      weighted_sums[i].Add(tx.price * tx.srs->shares[i]);
    }
    prices.push_back(tx.price);
    rows.push_back(&*tx.srs);
  }
  if (attributed == 0) {
    throw Error(ErrorCode::kOracleFailure,
                "no sampled transaction could be attributed");
  }

  CompensatedSum income;
  std::vector<Pending> settled;
  bool constant_price = true;
  for (std::size_t k = 0; k < pending.size(); ++k) {
    if (quarantined[k]) continue;
    income.Add(pending[k].tx.price);
    if (!settled.empty()) {
      constant_price =
          constant_price && pending[k].tx.price == settled.front().tx.price;
    }
    settled.push_back(std::move(pending[k]));
  }
  report.total_income = income.value();
  report.sampled_fraction =
      static_cast<double>(sample_size) / static_cast<double>(population);
  report.owner_payouts.resize(n);
  // Under a constant price p, income * mean share equals
  // (population / sample) * sum(p * share); that form reproduces SettleFull
  // bit for bit when the whole population is sampled.
  const double expansion = static_cast<double>(settled.size()) /
                           static_cast<double>(attributed);
  const double scale = beta_data * report.total_income;
  for (std::size_t i = 0; i < n; ++i) {
    report.owner_payouts[i] =
        constant_price
            ? beta_data * (expansion * weighted_sums[i].value())
            : scale * (share_sums[i].value() / static_cast<double>(attributed));
  }
  report.developer_payout = (1.0 - beta_data) * report.total_income;
  report.settled_count = static_cast<std::int64_t>(settled.size());
  report.price_share_correlation =
      PriceShareCorrelated(prices, rows, owner_count_);
  Commit(settled, report.quarantined_ids, report);
  return report;
}

void LedgerStore::Commit(const std::vector<Pending>& settled,
                         const std::vector<std::string>& quarantined,
                         const SettlementReport& report) {
  std::lock_guard lock(mu_);
  std::vector<std::string> lines;
  lines.reserve(settled.size());
  for (const Pending& p : settled) {
    Transaction tx = p.tx;
    tx.settled = true;
    lines.push_back(FormatTransactionLine(tx));
  }
  if (path_ && !lines.empty()) AppendLines(lines);
  for (const Pending& p : settled) {
    Transaction& tx = transactions_[p.index];
    tx.settled = true;
    tx.srs = p.tx.srs;
  }
  std::unordered_set<std::string> done;
  for (const Pending& p : settled) done.insert(p.tx.id);
  std::erase_if(retry_queue_,
                [&](const std::string& id) { return done.contains(id); });
  for (const std::string& id : quarantined) {
    if (std::find(retry_queue_.begin(), retry_queue_.end(), id) ==
        retry_queue_.end()) {
      retry_queue_.push_back(id);
    }
  }
  for (std::size_t i = 0; i < report.owner_payouts.size(); ++i) {
    owner_balances_[i] += report.owner_payouts[i];
  }
  developer_balance_ += report.developer_payout;
  ++settlements_;
  if (path_) WriteBalances();
}

int LedgerStore::owner_count() const {
  std::lock_guard lock(mu_);
  return owner_count_;
}

std::size_t LedgerStore::size() const {
  std::lock_guard lock(mu_);
  return transactions_.size();
}

std::size_t LedgerStore::unsettled_count() const {
  std::lock_guard lock(mu_);
  return static_cast<std::size_t>(
      std::count_if(transactions_.begin(), transactions_.end(),
                    [](const Transaction& tx) { return !tx.settled; }));
}

std::vector<Transaction> LedgerStore::transactions() const {
  std::lock_guard lock(mu_);
  return transactions_;
}

std::vector<double> LedgerStore::owner_balances() const {
  std::lock_guard lock(mu_);
  return owner_balances_;
}

double LedgerStore::developer_balance() const {
  std::lock_guard lock(mu_);
  return developer_balance_;
}

std::int64_t LedgerStore::settlement_count() const {
  std::lock_guard lock(mu_);
  return settlements_;
}

std::vector<std::string> LedgerStore::retry_queue() const {
  std::lock_guard lock(mu_);
  return retry_queue_;
}

std::string FormatSettlementCsv(const SettlementReport& report) {
  std::ostringstream out;
  out << "owner_id,payout\n";
  for (std::size_t i = 0; i < report.owner_payouts.size(); ++i) {
    out << i << ',' << FormatDouble(report.owner_payouts[i]) << '\n';
  }
  out << "developer," << FormatDouble(report.developer_payout) << '\n';
  out << "# total_income=" << FormatDouble(report.total_income)
      << " estimator=" << SettlementEstimatorName(report.estimator)
      << " seed=" << (report.seed ? std::to_string(*report.seed) : "none")
      << '\n';
  return out.str();
}

void WriteSettlementCsv(const std::filesystem::path& path,
                        const SettlementReport& report) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << FormatSettlementCsv(report);
  out.flush();
  if (!out) {
    throw Error(ErrorCode::kStorageFailure,
                "cannot write settlement report " + path.string());
  }
}

}  // namespace royalty
