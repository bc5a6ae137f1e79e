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

#include "royalty/dataset.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <utility>

#include "royalty/error.h"

namespace royalty {
namespace {

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() &&
         (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

}  // namespace

std::vector<std::string_view> SplitFields(std::string_view line, char sep) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string FormatDouble(double value) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) {
    throw Error(ErrorCode::kInvalidArgument, "cannot format double");
  }
  return std::string(buf, end);
}

double ParseDouble(std::string_view text) {
  text = Trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::kParseError,
                "not a number: '" + std::string(text) + "'");
  }
  return value;
}

Point ParsePoint(std::string_view text) {
  const char sep = text.find(';') != std::string_view::npos ? ';' : ',';
  const auto fields = SplitFields(Trim(text), sep);
  Point p(static_cast<Eigen::Index>(fields.size()));
  for (std::size_t j = 0; j < fields.size(); ++j) {
    p(static_cast<Eigen::Index>(j)) = ParseDouble(fields[j]);
  }
  return p;
}

int ValidatePartition(const Partition& partition) {
  int dimension = 0;
  for (std::size_t i = 0; i < partition.size(); ++i) {
    const OwnerDataset& owner = partition[i];
    if (owner.owner != static_cast<PlayerId>(i)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "partition owners must be 0..n-1 in order; slot " +
                      std::to_string(i) + " holds owner " +
                      std::to_string(owner.owner));
    }
    if (!owner.labels.empty() && owner.labels.size() != owner.points.size()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "labels do not align with points for owner " +
                      std::to_string(i));
    }
    for (const Point& p : owner.points) {
      const int d = static_cast<int>(p.size());
      if (d < 1) {
        throw Error(ErrorCode::kDimensionMismatch, "points need d >= 1");
      }
      if (dimension == 0) dimension = d;
      if (d != dimension) {
        throw Error(ErrorCode::kDimensionMismatch,
                    "mixed point dimensions " + std::to_string(dimension) +
                        " and " + std::to_string(d));
      }
    }
  }
  if (partition.size() > static_cast<std::size_t>(kMaxPlayers)) {
    throw Error(ErrorCode::kTooManyPlayers, "more than 64 owners");
  }
  return dimension;
}

Partition ParseDatasetCsv(std::istream& in) {
  std::map<int, OwnerDataset> owners;
  std::string line;
  int line_number = 0;
  int dimension = -1;
  bool first_row = true;
  while (std::getline(in, line)) {
    ++line_number;
    const std::string_view row = Trim(line);
    if (row.empty() || row.front() == '#') continue;
    const auto fields = SplitFields(row, ',');
    if (std::exchange(first_row, false) && Trim(fields[0]) == "owner_id") {
      continue;
    }
    if (fields.size() < 3) {
      throw Error(ErrorCode::kParseError,
                  "line " + std::to_string(line_number) +
                      ": expected owner_id,label,x0[,...]");
    }
    const int d = static_cast<int>(fields.size()) - 2;
    if (dimension == -1) dimension = d;
    if (d != dimension) {
      throw Error(ErrorCode::kParseError,
                  "line " + std::to_string(line_number) + ": expected " +
                      std::to_string(dimension) + " coordinates");
    }
    const std::string_view id_text = Trim(fields[0]);
    int owner_id = -1;
    const auto [ptr, ec] = std::from_chars(
        id_text.data(), id_text.data() + id_text.size(), owner_id);
    if (ec != std::errc() || ptr != id_text.data() + id_text.size() ||
        owner_id < 0) {
      throw Error(ErrorCode::kParseError,
                  "line " + std::to_string(line_number) + ": bad owner_id '" +
                      std::string(id_text) + "'");
    }
    Point p(d);
    for (int j = 0; j < d; ++j) {
      try {
        p(j) = ParseDouble(fields[static_cast<std::size_t>(j) + 2]);
      } catch (const Error& e) {
        throw Error(ErrorCode::kParseError,
                    "line " + std::to_string(line_number) + ": " + e.what());
      }
    }
    OwnerDataset& owner = owners[owner_id];
    owner.owner = owner_id;
    owner.points.push_back(std::move(p));
    owner.labels.emplace_back(Trim(fields[1]));
  }
  Partition partition;
  partition.reserve(owners.size());
  for (auto& [id, data] : owners) {
    if (id != static_cast<int>(partition.size())) {
      throw Error(ErrorCode::kParseError,
                  "owner ids must be contiguous from 0; missing owner " +
                      std::to_string(partition.size()));
    }
    partition.push_back(std::move(data));
  }
  ValidatePartition(partition);
  return partition;
}

void FormatDatasetCsv(std::ostream& out, const Partition& partition) {
  const int d = ValidatePartition(partition);
  out << "owner_id,label";
  for (int j = 0; j < d; ++j) out << ",x" << j;
  out << '\n';
  for (const OwnerDataset& owner : partition) {
    for (std::size_t k = 0; k < owner.points.size(); ++k) {
      const std::string& label =
          owner.labels.empty() ? std::string() : owner.labels[k];
      if (label.find_first_of(",\n\r") != std::string::npos) {
        throw Error(ErrorCode::kInvalidArgument,
                    "labels may not contain commas or newlines");
      }
      out << owner.owner << ',' << label;
      for (int j = 0; j < d; ++j) out << ',' << FormatDouble(owner.points[k](j));
      out << '\n';
    }
  }
}

Partition ReadDatasetCsv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kStorageFailure,
                "cannot open dataset " + path.string());
  }
  return ParseDatasetCsv(in);
}

void WriteDatasetCsv(const std::filesystem::path& path,
                     const Partition& partition) {
  std::ostringstream buffer;
  FormatDatasetCsv(buffer, partition);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << buffer.str();
  out.flush();
  if (!out) {
    throw Error(ErrorCode::kStorageFailure,
                "cannot write dataset " + path.string());
  }
}

}  // namespace royalty
