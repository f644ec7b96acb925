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

#include <string>
#include <vector>

namespace mmk {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct SelftestOptions {
  /// Test hook: perturb I_0 of every closed-form table before comparing.
  bool corrupt_table = false;
  unsigned long long seed = 20260101;
};

/// Brute-force equivalence checks for the intersection tables and the exact
/// kernel at desk-scale parameters.
std::vector<CheckResult> run_selftest(const SelftestOptions& options = {});

}  // namespace mmk
