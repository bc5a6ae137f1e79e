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

#include "royalty/game.h"

#include <algorithm>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <utility>

#include "royalty/error.h"

namespace royalty {

CoalitionGame::CoalitionGame(int n, UtilityOracle oracle, CacheMode cache_mode)
    : n_(n), oracle_(std::move(oracle)), cache_mode_(cache_mode) {
  if (n < 0 || n > kMaxPlayers) {
    throw Error(ErrorCode::kTooManyPlayers,
                "player count " + std::to_string(n) + " outside [0, 64]");
  }
  if (!oracle_) {
    throw Error(ErrorCode::kInvalidArgument, "game requires a utility oracle");
  }
}

double CoalitionGame::Evaluate(Coalition s) const {
  if (!s.FitsIn(n_)) {
    throw Error(ErrorCode::kIndexOutOfRange,
                "coalition " + s.ToString() + " has members outside [0, " +
                    std::to_string(n_) + ")");
  }
  if (cache_mode_ == CacheMode::kDisabled) {
    oracle_calls_.fetch_add(1, std::memory_order_relaxed);
    return oracle_(s);
  }
  {
    std::shared_lock lock(mu_);
    if (auto it = cache_.find(s); it != cache_.end()) return it->second;
  }
  // The oracle runs unlocked so distinct coalitions evaluate in parallel.
  oracle_calls_.fetch_add(1, std::memory_order_relaxed);
  const double value = oracle_(s);
  std::unique_lock lock(mu_);
  auto [it, inserted] = cache_.try_emplace(s, value);
  if (inserted) eval_count_.fetch_add(1, std::memory_order_relaxed);
  return it->second;
}

std::vector<double> TabulateUtilities(const CoalitionGame& game, int workers) {
  if (game.n() > 30) {
    throw Error(ErrorCode::kTooManyPlayers,
                "cannot tabulate 2^" + std::to_string(game.n()) +
                    " coalitions");
  }
  const std::int64_t size = std::int64_t{1} << game.n();
  std::vector<double> table(static_cast<std::size_t>(size));
  ParallelFor(size, workers, [&](std::int64_t bits) {
    table[static_cast<std::size_t>(bits)] =
        game.Evaluate(Coalition(static_cast<std::uint64_t>(bits)));
  });
  return table;
}

void ParallelFor(std::int64_t count, int workers,
                 const std::function<void(std::int64_t)>& fn) {
  if (count <= 0) return;
  const int threads =
      static_cast<int>(std::clamp<std::int64_t>(workers, 1, count));
  if (threads == 1) {
    for (std::int64_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::int64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    for (;;) {
      const std::int64_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
        next.store(count, std::memory_order_relaxed);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace royalty
