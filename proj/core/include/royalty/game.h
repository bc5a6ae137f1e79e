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

#ifndef ROYALTY_GAME_H_
#define ROYALTY_GAME_H_

#include <atomic>
#include <cstdint>
#include <functional>
#include <shared_mutex>
#include <unordered_map>
#include <vector>

#include "royalty/coalition.h"

namespace royalty {

// Deterministic utility v(S), in nats. Must be a pure function of the
// coalition and safe to call from several threads at once.
using UtilityOracle = std::function<double(Coalition)>;

enum class CacheMode { kEnabled, kDisabled };

// A transferable-utility game: player count plus a memoized utility oracle.
// Every solver consumes this type.
//
// Evaluate may be called concurrently. Two threads racing on the same
// uncached coalition may both invoke the oracle, but only the first stored
// value is kept and both callers observe it.
class CoalitionGame {
 public:
  CoalitionGame(int n, UtilityOracle oracle,
                CacheMode cache_mode = CacheMode::kEnabled);

  CoalitionGame(const CoalitionGame&) = delete;
  CoalitionGame& operator=(const CoalitionGame&) = delete;

  int n() const { return n_; }

  // Throws IndexOutOfRange if `s` has a member >= n; oracle exceptions
  // propagate unchanged.
  double Evaluate(Coalition s) const;

  // Distinct coalitions stored in the cache (never exceeds 2^n).
  std::int64_t eval_count() const {
    return eval_count_.load(std::memory_order_relaxed);
  }
  // Raw oracle invocations, including duplicates from races or a disabled
  // cache.
  std::int64_t oracle_calls() const {
    return oracle_calls_.load(std::memory_order_relaxed);
  }

  CacheMode cache_mode() const { return cache_mode_; }

 private:
  int n_;
  UtilityOracle oracle_;
  CacheMode cache_mode_;
  mutable std::shared_mutex mu_;
  mutable std::unordered_map<Coalition, double> cache_;
  mutable std::atomic<std::int64_t> eval_count_{0};
  mutable std::atomic<std::int64_t> oracle_calls_{0};
};

// Evaluates all 2^n coalitions, indexed by bit pattern. Coalitions are
// spread over `workers` threads; the table does not depend on the split.
// Requires n <= 30.
std::vector<double> TabulateUtilities(const CoalitionGame& game,
                                      int workers = 1);

// Runs fn(i) for i in [0, count) on up to `workers` threads. Each index is
// processed exactly once; callers write results to per-index slots so the
// outcome is independent of scheduling. The first exception thrown by any
// task is rethrown on the calling thread.
void ParallelFor(std::int64_t count, int workers,
                 const std::function<void(std::int64_t)>& fn);

}  // namespace royalty

#endif  // ROYALTY_GAME_H_
