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

#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "mmk/combinatorics.hpp"
#include "mmk/intersect.hpp"
#include "mmk/seq_model.hpp"

namespace mmk {

/// A strictly increasing set of 0-based k-mer positions.
class IndexSubset {
 public:
  IndexSubset() = default;
  IndexSubset(std::vector<int> positions, int k);
  IndexSubset(std::initializer_list<int> positions, int k)
      : IndexSubset(std::vector<int>(positions), k) {}

  std::span<const int> positions() const { return positions_; }
  int size() const { return static_cast<int>(positions_.size()); }
  /// 1-based, brace-delimited form for logs, e.g. "{1,3}".
  std::string to_string() const;

  bool operator==(const IndexSubset&) const = default;
  auto operator<=>(const IndexSubset&) const = default;

 private:
  std::vector<int> positions_;
};

/// Pair counts by Hamming distance for one sequence pair, restricted to
/// distances 0..t with t = min(2m, k). F[i] counts (pair, subset) incidences
/// where the pair agrees on a (k-i)-subset of positions.
struct MismatchProfile {
  int k = 0;
  int t = 0;
  std::vector<std::uint64_t> F;
  std::vector<std::uint64_t> M;
};

enum class SortBackend {
  comparison,  // std::sort on packed keys, or on index vectors when wide
  counting,    // LSD counting sort, one pass per position
};

/// Number of occurrence pairs (a, b) in SX x SY with a|theta == b|theta.
/// `radix` is the alphabet size; 0 means derive it from the data.
std::uint64_t f_theta(const KmerSet& sx, const KmerSet& sy,
                      const IndexSubset& theta,
                      SortBackend backend = SortBackend::comparison,
                      int radix = 0);

/// M_i from F_i via M_i = F_i - sum_{j<i} C(k-j, k-i) M_j.
std::vector<std::uint64_t> mismatch_counts_from_subset_counts(
    std::span<const std::uint64_t> F, int k);

MismatchProfile exact_profile(const KmerSet& sx, const KmerSet& sy, int m,
                              SortBackend backend = SortBackend::comparison);

/// K(X, Y | k, m) = sum_i M_i * I_i, exact.
BigInt exact_kernel(const SequenceRecord& x, const SequenceRecord& y, int k,
                    int m, const IntersectionTable& table,
                    SortBackend backend = SortBackend::comparison);
BigInt exact_kernel(const KmerSet& sx, const KmerSet& sy,
                    const IntersectionTable& table,
                    SortBackend backend = SortBackend::comparison);

double exact_kernel_value(const SequenceRecord& x, const SequenceRecord& y,
                          int k, int m, const IntersectionTable& table,
                          SortBackend backend = SortBackend::comparison);

/// All-pairs Hamming histogram over distances 0..k.
std::vector<std::uint64_t> brute_force_profile(const KmerSet& sx,
                                               const KmerSet& sy);

/// Sum over all k-mer pairs of the exhaustively enumerated neighborhood
/// intersection. Independent of the closed form and of sort-enumerate.
BigInt brute_force_kernel(const SequenceRecord& x, const SequenceRecord& y,
                          int k, int m, int s);

/// Throws ValidationError unless table matches (k, m) and every residue of
/// the two sets is below table.s.
void check_table(const IntersectionTable& table, const KmerSet& sx,
                 const KmerSet& sy);

}  // namespace mmk
