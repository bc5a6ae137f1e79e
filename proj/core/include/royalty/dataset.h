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

#ifndef ROYALTY_DATASET_H_
#define ROYALTY_DATASET_H_

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "royalty/coalition.h"

namespace royalty {

using Point = Eigen::VectorXd;

// One copyright owner's training data. labels[j] tags points[j]; an empty
// label means untagged.
struct OwnerDataset {
  PlayerId owner = 0;
  std::vector<Point> points;
  std::vector<std::string> labels;
};

// Owners 0..n-1, in order.
using Partition = std::vector<OwnerDataset>;

// A generated sample and the (optional) label it was conditioned on.
struct GenerationEvent {
  Point x;
  std::optional<std::string> conditioning;
};

// Throws InvalidArgument unless owners are exactly 0..n-1 in order, every
// point has the same dimension d >= 1, and labels align with points.
// Returns d (0 for an empty partition).
int ValidatePartition(const Partition& partition);

// Dataset CSV: header `owner_id,label,x0,...,x{d-1}`, one row per point.
// The header is optional on input. Coordinates are written in the shortest
// form that parses back to the same double.
Partition ParseDatasetCsv(std::istream& in);
void FormatDatasetCsv(std::ostream& out, const Partition& partition);

// File wrappers; I/O failures throw StorageFailure, malformed content
// ParseError.
Partition ReadDatasetCsv(const std::filesystem::path& path);
void WriteDatasetCsv(const std::filesystem::path& path,
                     const Partition& partition);

// Shortest round-trip decimal form.
std::string FormatDouble(double value);
// Full-string parse; throws ParseError.
double ParseDouble(std::string_view text);

// "1.5,-2" -> point. Separator is ',' or ';'.
Point ParsePoint(std::string_view text);

std::vector<std::string_view> SplitFields(std::string_view line, char sep);

}  // namespace royalty

#endif  // ROYALTY_DATASET_H_
