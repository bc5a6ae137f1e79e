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

#ifndef ROYALTY_TOOLS_CLI_H_
#define ROYALTY_TOOLS_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace royalty::cli {

// Process exit statuses.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitOracle = 3;
inline constexpr int kExitStorage = 4;

// Runs `royalty <args...>`; `args` excludes the program name. Reports go to
// files under --out and tables are echoed to `out`; diagnostics go to `err`.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

}  // namespace royalty::cli

#endif  // ROYALTY_TOOLS_CLI_H_
