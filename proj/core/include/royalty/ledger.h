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

#ifndef ROYALTY_LEDGER_H_
#define ROYALTY_LEDGER_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "royalty/dataset.h"
#include "royalty/srs.h"

namespace royalty {

// One priced generation.
struct Transaction {
  std::string id;
  double price = 0.0;
  GenerationEvent event;
  // Filled in once the transaction has been attributed.
  std::optional<SrsVector> srs;
  bool settled = false;
};

enum class SettlementEstimator { kFull, kSubsampled };

std::string_view SettlementEstimatorName(SettlementEstimator estimator);

struct SettlementReport {
  std::vector<double> owner_payouts;
  double developer_payout = 0.0;
  double total_income = 0.0;
  double sampled_fraction = 1.0;
  SettlementEstimator estimator = SettlementEstimator::kFull;
  std::optional<std::uint64_t> seed;
  std::int64_t settled_count = 0;
  // Transactions whose attribution failed; left unsettled for a retry.
  std::vector<std::string> quarantined_ids;
  // Set when prices vary and correlate with some owner's share, in which
  // case the subsampled estimate is no longer unbiased.
  bool price_share_correlation = false;
};

// Computes the royalty shares for a transaction that has none stored.
using Attributor = std::function<SrsVector(const Transaction&)>;

// Append-only transaction log plus a balance snapshot.
//
// Log file: one record per line, `id|price|event-ref|srs-csv|settled-flag`.
// event-ref is `[label@]x0;x1;...`, srs-csv is the comma-separated shares
// (prefixed with `~` when the vector is degenerate, empty when absent), and
// the flag is 0 or 1. Settlement appends a flag-1 copy of each transaction
// it settles; on replay the later line marks the earlier one settled.
//
// Balance snapshot (`<log>.balances`), rewritten atomically after each
// settlement:
//   owners=<n>
//   settlements=<count>
//   owner,<i>,<balance>    (n lines)
//   developer,<balance>
//
// record() may be called from any thread. Settlements are serialized; a
// transaction recorded while a settlement runs is left for the next one.
class LedgerStore {
 public:
  // In-memory store for `owner_count` owners.
  explicit LedgerStore(int owner_count);

  // Opens (or creates) a persisted store. The owner count comes from the
  // balance snapshot if one exists, else from the first stored share vector,
  // else from `owner_count`. Throws StorageFailure on unreadable or corrupt
  // files.
  static std::unique_ptr<LedgerStore> Open(
      const std::filesystem::path& log_path,
      std::optional<int> owner_count = std::nullopt);

  LedgerStore(const LedgerStore&) = delete;
  LedgerStore& operator=(const LedgerStore&) = delete;

  // Throws DuplicateId, InvalidArgument (negative price, bad id or share
  // width) or StorageFailure.
  void Record(Transaction tx);

  // owner_payouts[i] = beta * sum(price * SRS_i); developer gets
  // (1 - beta) * sum(price).
  SettlementReport SettleFull(double beta_data, const Attributor& attributor);

  // Attributes a uniform sample of `sample_size` unsettled transactions
  // (without replacement), estimates the mean share vector from it and
  // scales by the total unsettled income. Throws InvalidArgument unless
  // 1 <= sample_size <= unsettled count.
  SettlementReport SettleSubsampled(double beta_data,
                                    const Attributor& attributor,
                                    std::int64_t sample_size,
                                    std::uint64_t seed);

  int owner_count() const;
  std::size_t size() const;
  std::size_t unsettled_count() const;
  std::vector<Transaction> transactions() const;
  std::vector<double> owner_balances() const;
  double developer_balance() const;
  std::int64_t settlement_count() const;
  // Ids quarantined by past settlements and not yet settled.
  std::vector<std::string> retry_queue() const;

 private:
  LedgerStore(int owner_count, std::optional<std::filesystem::path> path);

  void CheckBeta(double beta_data) const;
  struct Pending {
    std::size_t index;
    Transaction tx;
  };
  std::vector<Pending> SnapshotUnsettled() const;
  std::optional<SrsVector> AttributeOne(const Transaction& tx,
                                        const Attributor& attributor) const;
  // Marks `settled` (with their share vectors, when computed) settled,
  // queues `quarantined`, and books the report's payouts.
  void Commit(const std::vector<Pending>& settled,
              const std::vector<std::string>& quarantined,
              const SettlementReport& report);
  void AppendLines(const std::vector<std::string>& lines);
  void WriteBalances() const;

  int owner_count_;
  std::optional<std::filesystem::path> path_;
  mutable std::mutex mu_;
  std::mutex settle_mu_;
  std::vector<Transaction> transactions_;
  std::unordered_set<std::string> ids_;
  std::vector<double> owner_balances_;
  double developer_balance_ = 0.0;
  std::int64_t settlements_ = 0;
  std::vector<std::string> retry_queue_;
};

// Serialized log line (no trailing newline) and its inverse.
std::string FormatTransactionLine(const Transaction& tx);
Transaction ParseTransactionLine(std::string_view line);

// Settlement CSV: `owner_id,payout` header, one row per owner, a
// `developer,<payout>` row and a trailing
// `# total_income=<v> estimator=<tag> seed=<s>` comment (`seed=none` for
// full settlement).
std::string FormatSettlementCsv(const SettlementReport& report);
void WriteSettlementCsv(const std::filesystem::path& path,
                        const SettlementReport& report);

}  // namespace royalty

#endif  // ROYALTY_LEDGER_H_
