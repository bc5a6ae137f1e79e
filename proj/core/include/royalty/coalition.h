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

#ifndef ROYALTY_COALITION_H_
#define ROYALTY_COALITION_H_

#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iterator>
#include <span>
#include <string>
#include <vector>

namespace royalty {

// Maximum number of players supported by the word-sized coalition bit set.
inline constexpr int kMaxPlayers = 64;

// Zero-based player index into the enclosing game.
using PlayerId = int;

// A set of players, stored as a 64-bit mask. Only bits below the game's
// player count may be set; Coalition itself does not know n, so the bound is
// enforced by the factory functions and by CoalitionGame::Evaluate.
class Coalition {
 public:
  constexpr Coalition() = default;
  constexpr explicit Coalition(std::uint64_t bits) : bits_(bits) {}

  static constexpr Coalition Empty() { return Coalition(); }

  // Every player in [0, n).
  static Coalition Grand(int n);

  // Set of the given indices; duplicates collapse. Throws IndexOutOfRange
  // for any index outside [0, n).
  static Coalition FromMembers(std::span<const int> indices, int n);

  constexpr std::uint64_t bits() const { return bits_; }
  constexpr bool empty() const { return bits_ == 0; }
  int size() const { return std::popcount(bits_); }

  bool Contains(PlayerId i) const { return (bits_ >> i) & 1u; }
  Coalition With(PlayerId i) const {
    return Coalition(bits_ | (std::uint64_t{1} << i));
  }
  Coalition Without(PlayerId i) const {
    return Coalition(bits_ & ~(std::uint64_t{1} << i));
  }

  // True when every member is below n.
  bool FitsIn(int n) const;

  // Members in increasing order.
  std::vector<PlayerId> Members() const;

  std::string ToString() const;

  friend constexpr bool operator==(Coalition a, Coalition b) = default;

 private:
  std::uint64_t bits_ = 0;
};

// Number of k-subsets of an m-set, exact. Throws InvalidArgument on
// overflow (never reached for m <= 64 with the ranges used here).
std::uint64_t Binomial(int m, int k);

// Every subset of N \ {excluded} with exactly `size` members, in increasing
// order of the compressed bit pattern (Gosper's hack over n-1 bits with the
// excluded bit re-inserted).
class SubsetRange {
 public:
  class Iterator {
   public:
    using iterator_category = std::input_iterator_tag;
    using value_type = Coalition;
    using difference_type = std::ptrdiff_t;

    Iterator() = default;
    Iterator(const SubsetRange* range, std::uint64_t compact, bool done)
        : range_(range), compact_(compact), done_(done) {}

    Coalition operator*() const;
    Iterator& operator++();
    Iterator operator++(int) {
      Iterator copy = *this;
      ++*this;
      return copy;
    }
    friend bool operator==(const Iterator& a, const Iterator& b) {
      if (a.done_ || b.done_) return a.done_ == b.done_;
      return a.compact_ == b.compact_;
    }

   private:
    const SubsetRange* range_ = nullptr;
    std::uint64_t compact_ = 0;
    bool done_ = true;
  };

  SubsetRange(int n, PlayerId excluded, int size);

  Iterator begin() const;
  Iterator end() const { return Iterator(this, 0, true); }

  // C(n-1, size).
  std::uint64_t count() const { return Binomial(n_ - 1, size_); }

 private:
  friend class Iterator;
  Coalition Expand(std::uint64_t compact) const;

  int n_;
  PlayerId excluded_;
  int size_;
};

// Throws InvalidArgument unless 0 <= size <= n-1 and IndexOutOfRange unless
// excluded is a valid player.
SubsetRange SubsetsExcluding(int n, PlayerId excluded, int size);

}  // namespace royalty

template <>
struct std::hash<royalty::Coalition> {
  std::size_t operator()(royalty::Coalition c) const noexcept {
    return std::hash<std::uint64_t>{}(c.bits());
  }
};

#endif  // ROYALTY_COALITION_H_
