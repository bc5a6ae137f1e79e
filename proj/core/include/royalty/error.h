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

#ifndef ROYALTY_ERROR_H_
#define ROYALTY_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace royalty {

enum class ErrorCode {
  kInvalidArgument,
  kIndexOutOfRange,
  kTooManyPlayers,
  kOracleFailure,
  kNonFinite,
  kEmptyDataset,
  kDimensionMismatch,
  kDuplicateId,
  kStorageFailure,
  kParseError,
};

std::string_view ErrorCodeName(ErrorCode code);

// All library failures are reported through this exception type. The code
// lets callers (the CLI in particular) map failures to exit statuses.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
      return "InvalidArgument";
    case ErrorCode::kIndexOutOfRange:
      return "IndexOutOfRange";
    case ErrorCode::kTooManyPlayers:
      return "TooManyPlayers";
    case ErrorCode::kOracleFailure:
      return "OracleFailure";
    case ErrorCode::kNonFinite:
      return "NonFinite";
    case ErrorCode::kEmptyDataset:
      return "EmptyDataset";
    case ErrorCode::kDimensionMismatch:
      return "DimensionMismatch";
    case ErrorCode::kDuplicateId:
      return "DuplicateId";
    case ErrorCode::kStorageFailure:
      return "StorageFailure";
    case ErrorCode::kParseError:
      return "ParseError";
  }
  return "Unknown";
}

}  // namespace royalty

#endif  // ROYALTY_ERROR_H_
