// Copyright 2026 The permkiss Authors. All Rights Reserved.
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

#ifndef PERMKISS_TOOLS_CLI_H_
#define PERMKISS_TOOLS_CLI_H_

#include <ostream>

namespace permkiss::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kInvalidResult = 1;  // solve finished without a valid permutation
inline constexpr int kFailure = 2;        // bad usage, bad input or solver error

// Runs the command line. Reports and tables go to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace permkiss::cli

#endif  // PERMKISS_TOOLS_CLI_H_
