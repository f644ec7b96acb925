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
#include <span>
#include <vector>

#include "mmk/combinatorics.hpp"
#include "mmk/seq_model.hpp"

namespace mmk {

/// Sizes of intersections of m-mismatch neighborhoods of two k-mers at
/// Hamming distance d, for d = 0..min(2m, k). Beyond 2m the intersection is
/// empty, so the table stops there.
struct IntersectionTable {
  int k = 0;
  int m = 0;
  int s = 0;
  std::vector<BigInt> values;

  int t() const { return static_cast<int>(values.size()) - 1; }
  const BigInt& operator[](int d) const { return values[d]; }
  /// Largest entry; used as the scale of the additive error bound.
  BigInt max() const;
};

/// |N_q(a) ∩ N_r(b)| for any two k-mers a, b at Hamming distance d over an
/// alphabet of size s, where N_q(a) is the set of k-mers at distance exactly
/// q from a. Closed form; no enumeration.
BigInt n_qr(int q, int r, int d, int k, int s);

IntersectionTable build_intersection_table(int k, int m, int s);

/// Enumeration cap for the exhaustive oracle (s^k).
inline constexpr std::uint64_t kBruteForceCap = 10'000'000;

/// Counts g in Σ^k with d(g, alpha) <= m and d(g, beta) <= m by walking all
/// of Σ^k. Throws ValidationError when s^k exceeds kBruteForceCap.
std::uint64_t brute_force_intersection(std::span<const Residue> alpha,
                                       std::span<const Residue> beta, int m,
                                       int s);

/// Same count, but enumerates the m-ball around alpha explicitly and tests
/// membership in beta's ball. Usable where s^k is too large to walk.
std::uint64_t ball_enumeration_intersection(std::span<const Residue> alpha,
                                            std::span<const Residue> beta,
                                            int m, int s);

int hamming_distance(std::span<const Residue> a, std::span<const Residue> b);

}  // namespace mmk
