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

#ifndef ROYALTY_NUMERIC_H_
#define ROYALTY_NUMERIC_H_

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>

namespace royalty {

// Neumaier's variant of Kahan summation.
class CompensatedSum {
 public:
  void Add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      compensation_ += (sum_ - t) + x;
    } else {
      compensation_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

inline double LogSumExp(std::span<const double> values) {
  if (values.empty()) return -std::numeric_limits<double>::infinity();
  const double peak = *std::max_element(values.begin(), values.end());
  if (!std::isfinite(peak)) return peak;
  CompensatedSum sum;
  for (const double v : values) sum.Add(std::exp(v - peak));
  return peak + std::log(sum.value());
}

// log(mean(exp(values))), stable for large magnitudes.
inline double LogMeanExp(std::span<const double> values) {
  return LogSumExp(values) - std::log(static_cast<double>(values.size()));
}

inline double NatsToBits(double nats) { return nats / std::numbers::ln2; }

}  // namespace royalty

#endif  // ROYALTY_NUMERIC_H_
