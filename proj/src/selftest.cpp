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

#include "mmk/selftest.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "mmk/approx_kernel.hpp"
#include "mmk/exact_kernel.hpp"
#include "mmk/intersect.hpp"
#include "mmk/rng.hpp"

namespace mmk {

namespace {

std::vector<Residue> random_residues(Rng& rng, std::size_t len, int s) {
  std::vector<Residue> out(len);
  for (auto& r : out) r = static_cast<Residue>(uniform_below(rng, s));
  return out;
}

/// A random k-mer pair at Hamming distance exactly d.
std::pair<std::vector<Residue>, std::vector<Residue>> pair_at_distance(
    Rng& rng, int k, int s, int d) {
  auto a = random_residues(rng, k, s);
  auto b = a;
  std::vector<int> positions(k);
  for (int i = 0; i < k; ++i) positions[i] = i;
  for (int i = 0; i < d; ++i) {
    const auto j = i + static_cast<int>(uniform_below(rng, k - i));
    std::swap(positions[i], positions[j]);
    const int pos = positions[i];
    const auto shift = 1 + uniform_below(rng, s - 1);
    b[pos] = static_cast<Residue>((a[pos] + shift) % s);
  }
  return {a, b};
}

bool fits_full_enumeration(int k, int s) {
  std::uint64_t space = 1;
  for (int i = 0; i < k; ++i) {
    space *= static_cast<std::uint64_t>(s);
    if (space > kBruteForceCap) return false;
  }
  return true;
}

CheckResult check_tables(Rng& rng, bool corrupt) {
  CheckResult result{"intersection table vs enumeration (k<=6, m<=2, s in {2,4,20})",
                     true, ""};
  int compared = 0;
  for (const int s : {2, 4, 20}) {
    for (int k = 1; k <= 6; ++k) {
      for (int m = 0; m <= 2; ++m) {
        auto table = build_intersection_table(k, m, s);
        if (corrupt) table.values[0] += 1;
        for (int d = 0; d <= table.t(); ++d) {
          for (int rep = 0; rep < 3; ++rep) {
            const auto [a, b] = pair_at_distance(rng, k, s, d);
            const std::uint64_t oracle =
                fits_full_enumeration(k, s)
                    ? brute_force_intersection(a, b, m, s)
                    : ball_enumeration_intersection(a, b, m, s);
            ++compared;
            if (table[d] != oracle && result.passed) {
              result.passed = false;
              std::ostringstream msg;
              msg << "k=" << k << " m=" << m << " s=" << s << " d=" << d
                  << ": table " << table[d] << " vs oracle " << oracle;
              result.detail = msg.str();
            }
          }
        }
      }
    }
  }
  if (result.passed) result.detail = std::to_string(compared) + " comparisons";
  return result;
}

CheckResult check_kernels(Rng& rng, bool corrupt) {
  CheckResult result{"exact kernel vs neighborhood oracle (DNA and binary)",
                     true, ""};
  int instances = 0;
  for (const int s : {4, 2}) {
    for (int rep = 0; rep < 12; ++rep) {
      const int k = 1 + static_cast<int>(uniform_below(rng, 6));
      const int m = static_cast<int>(uniform_below(rng, 3));
      const SequenceRecord x{"x", random_residues(rng, 1 + uniform_below(rng, 30), s), {}};
      const SequenceRecord y{"y", random_residues(rng, 1 + uniform_below(rng, 30), s), {}};
      auto table = build_intersection_table(k, m, s);
      if (corrupt) table.values[0] += 1;
      const BigInt fast = exact_kernel(x, y, k, m, table);
      const BigInt slow = brute_force_kernel(x, y, k, m, s);
      ++instances;
      if (fast != slow && result.passed) {
        result.passed = false;
        std::ostringstream msg;
        msg << "k=" << k << " m=" << m << " s=" << s << ": " << fast
            << " vs " << slow;
        result.detail = msg.str();
      }
    }
  }
  if (result.passed) result.detail = std::to_string(instances) + " instances";
  return result;
}

CheckResult check_profiles(Rng& rng) {
  CheckResult result{"sort-enumerate profile vs all-pairs histogram", true, ""};
  for (int rep = 0; rep < 30 && result.passed; ++rep) {
    const int k = 1 + static_cast<int>(uniform_below(rng, 6));
    const int m = static_cast<int>(uniform_below(rng, 3));
    const auto sx = extract_kmers(random_residues(rng, uniform_below(rng, 40), 4), k);
    const auto sy = extract_kmers(random_residues(rng, uniform_below(rng, 40), 4), k);
    const auto fast = exact_profile(sx, sy, m);
    const auto counting = exact_profile(sx, sy, m, SortBackend::counting);
    const auto hist = brute_force_profile(sx, sy);
    for (int i = 0; i <= fast.t; ++i) {
      if (fast.M[i] != hist[i] || counting.M[i] != hist[i]) {
        result.passed = false;
        result.detail = "mismatch at k=" + std::to_string(k) +
                        " m=" + std::to_string(m) + " i=" + std::to_string(i);
        break;
      }
    }
  }
  if (result.passed) result.detail = "30 instances, both sort backends";
  return result;
}

CheckResult check_full_coverage(Rng& rng) {
  CheckResult result{"full-coverage sampling reproduces exact kernel", true, ""};
  for (int rep = 0; rep < 20 && result.passed; ++rep) {
    const int k = 1 + static_cast<int>(uniform_below(rng, 6));
    const int m = static_cast<int>(uniform_below(rng, 3));
    const SequenceRecord x{"x", random_residues(rng, uniform_below(rng, 40), 4), {}};
    const SequenceRecord y{"y", random_residues(rng, uniform_below(rng, 40), 4), {}};
    const auto table = build_intersection_table(k, m, 4);
    SamplingConfig config;
    config.cap = 300;
    config.seed = rng();
    const auto plan = build_theta_plan(k, m, config);
    const double approx = approx_kernel_value(x, y, k, m, table, plan);
    const BigInt exact = exact_kernel(x, y, k, m, table);
    if (BigInt(static_cast<long long>(std::llround(approx))) != exact) {
      result.passed = false;
      std::ostringstream msg;
      msg << "k=" << k << " m=" << m << ": " << approx << " vs " << exact;
      result.detail = msg.str();
    }
  }
  if (result.passed) result.detail = "20 instances";
  return result;
}

}  // namespace

std::vector<CheckResult> run_selftest(const SelftestOptions& options) {
  Rng rng(options.seed);
  std::vector<CheckResult> results;
  results.push_back(check_tables(rng, options.corrupt_table));
  results.push_back(check_kernels(rng, options.corrupt_table));
  results.push_back(check_profiles(rng));
  results.push_back(check_full_coverage(rng));
  return results;
}

}  // namespace mmk
