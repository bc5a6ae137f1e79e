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

#include "royalty/coalition.h"

#include <algorithm>
#include <numeric>
#include <string>

#include "royalty/error.h"

namespace royalty {

Coalition Coalition::Grand(int n) {
  if (n < 0 || n > kMaxPlayers) {
    throw Error(ErrorCode::kTooManyPlayers,
                "player count " + std::to_string(n) + " outside [0, 64]");
  }
  if (n == kMaxPlayers) return Coalition(~std::uint64_t{0});
  return Coalition((std::uint64_t{1} << n) - 1);
}

Coalition Coalition::FromMembers(std::span<const int> indices, int n) {
  std::uint64_t bits = 0;
  for (const int i : indices) {
    if (i < 0 || i >= n || i >= kMaxPlayers) {
      throw Error(ErrorCode::kIndexOutOfRange,
                  "player " + std::to_string(i) + " not in [0, " +
                      std::to_string(n) + ")");
    }
    bits |= std::uint64_t{1} << i;
  }
  return Coalition(bits);
}

bool Coalition::FitsIn(int n) const {
  if (n >= kMaxPlayers) return true;
  if (n <= 0) return bits_ == 0;
  return (bits_ >> n) == 0;
}

std::vector<PlayerId> Coalition::Members() const {
  std::vector<PlayerId> out;
  out.reserve(size());
  for (std::uint64_t rest = bits_; rest != 0; rest &= rest - 1) {
    out.push_back(std::countr_zero(rest));
  }
  return out;
}

std::string Coalition::ToString() const {
  std::string out = "{";
  bool first = true;
  for (const PlayerId i : Members()) {
    if (!first) out += ",";
    out += std::to_string(i);
    first = false;
  }
  return out + "}";
}

std::uint64_t Binomial(int m, int k) {
  if (k < 0 || m < 0 || k > m) return 0;
  k = std::min(k, m - k);
  // result * (m - k + j) is divisible by j; cancelling gcd(result, j)
  // first keeps every intermediate within the final value.
  std::uint64_t result = 1;
  for (int j = 1; j <= k; ++j) {
    const std::uint64_t factor = static_cast<std::uint64_t>(m - k + j);
    const std::uint64_t g = std::gcd(result, static_cast<std::uint64_t>(j));
    const std::uint64_t reduced = result / g;
    const std::uint64_t step = factor / (static_cast<std::uint64_t>(j) / g);
    if (__builtin_mul_overflow(reduced, step, &result)) {
      throw Error(ErrorCode::kInvalidArgument, "binomial overflow");
    }
  }
  return result;
}

SubsetRange::SubsetRange(int n, PlayerId excluded, int size)
    : n_(n), excluded_(excluded), size_(size) {}

Coalition SubsetRange::Expand(std::uint64_t compact) const {
  const std::uint64_t low_mask = (std::uint64_t{1} << excluded_) - 1;
  const std::uint64_t low = compact & low_mask;
  const std::uint64_t high = (compact & ~low_mask) << 1;
  return Coalition(low | high);
}

SubsetRange::Iterator SubsetRange::begin() const {
  if (size_ == 0) return Iterator(this, 0, false);
  return Iterator(this, (std::uint64_t{1} << size_) - 1, false);
}

Coalition SubsetRange::Iterator::operator*() const {
  return range_->Expand(compact_);
}

SubsetRange::Iterator& SubsetRange::Iterator::operator++() {
  const int width = range_->n_ - 1;
  if (compact_ == 0) {
    done_ = true;
    return *this;
  }
  // Gosper's hack: next larger integer with the same popcount.
  const std::uint64_t c = compact_ & (~compact_ + 1);
  const std::uint64_t r = compact_ + c;
  if (r == 0) {
    done_ = true;
    return *this;
  }
  const std::uint64_t next = (((r ^ compact_) >> 2) / c) | r;
  if (width < 64 && (next >> width) != 0) {
    done_ = true;
  } else {
    compact_ = next;
  }
  return *this;
}

SubsetRange SubsetsExcluding(int n, PlayerId excluded, int size) {
  if (n < 1 || n > kMaxPlayers) {
    throw Error(ErrorCode::kInvalidArgument,
                "player count must be in [1, 64], got " + std::to_string(n));
  }
  if (excluded < 0 || excluded >= n) {
    throw Error(ErrorCode::kIndexOutOfRange,
                "excluded player " + std::to_string(excluded) +
                    " not in [0, " + std::to_string(n) + ")");
  }
  if (size < 0 || size > n - 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "subset size " + std::to_string(size) + " not in [0, " +
                    std::to_string(n - 1) + "]");
  }
  return SubsetRange(n, excluded, size);
}

}  // namespace royalty
