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

#ifndef ROYALTY_RANDOM_H_
#define ROYALTY_RANDOM_H_

#include <cstdint>
#include <random>
#include <span>
#include <string_view>

namespace royalty {

// SplitMix64 finalizer. Used to derive independent, well-mixed seeds.
std::uint64_t MixSeed(std::uint64_t value);

// Seed for the `index`-th item of a stream keyed by `seed`. Every
// permutation, latent trajectory, and sample draw gets its own generator so
// results do not depend on how work is split across threads.
std::uint64_t DeriveSeed(std::uint64_t seed, std::uint64_t index);

// Splits a root seed into a named sub-stream ("mc_solver", "latent", ...).
std::uint64_t DeriveStream(std::uint64_t root, std::string_view tag);

// Thin wrapper around std::mt19937_64 with distribution helpers whose output
// is fully specified (the std:: distributions are implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(MixSeed(seed)) {}

  std::uint64_t NextU64() { return engine_(); }

  // Uniform in [0, 1) with 53 bits of precision.
  double Uniform01();

  // Uniform integer in [0, bound). `bound` must be positive.
  std::uint64_t UniformBelow(std::uint64_t bound);

  // Standard normal via the Marsaglia polar method.
  double StandardNormal();

  template <typename T>
  void Shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(UniformBelow(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
  bool has_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

}  // namespace royalty

#endif  // ROYALTY_RANDOM_H_
