// Copyright 2026 The mmkernel Authors
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

#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace mmk {

/// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 2;
inline constexpr int kExitValidation = 3;
inline constexpr int kExitNumeric = 4;
inline constexpr int kExitSelftestFailed = 1;

/// Entry point of the `mmkernel` tool. args[0] is the program name. Logs go
/// to `log`; data goes only to the files named on the command line.
int run_cli(const std::vector<std::string>& args, std::ostream& log);

}  // namespace mmk
