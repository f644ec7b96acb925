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

#include "mmk/intersect.hpp"

#include <algorithm>
#include <string>

#include "mmk/error.hpp"

namespace mmk {

namespace {

BigInt ipow(long base, long exp) {
  // 0^0 = 1 falls out of the empty product.
  BigInt out = 1;
  for (long i = 0; i < exp; ++i) out *= base;
  return out;
}

void check_params(int k, int m, int s) {
  if (k < 1) throw ValidationError("k must be >= 1, got " + std::to_string(k));
  if (m < 0) throw ValidationError("m must be >= 0, got " + std::to_string(m));
  if (s < 2) {
    throw ValidationError("alphabet size must be >= 2, got " +
                          std::to_string(s));
  }
}

}  // namespace

BigInt IntersectionTable::max() const {
  BigInt best = 0;
  for (const auto& v : values) best = std::max(best, v);
  return best;
}

BigInt n_qr(int q, int r, int d, int k, int s) {
  if (k < 1 || s < 2 || q < 0 || r < 0 || d < 0 || q > k || r > k || d > k) {
    throw ValidationError("n_qr: parameter out of range (q=" +
                          std::to_string(q) + ", r=" + std::to_string(r) +
                          ", d=" + std::to_string(d) + ", k=" +
                          std::to_string(k) + ", s=" + std::to_string(s) + ")");
  }
  const long excess = static_cast<long>(q) + r - d;
  if (excess < 0) return 0;

  // t counts positions outside the d differing ones that are changed in
  // the common neighbor; the remaining changes fall on the differing
  // positions, split among "agree with a", "agree with b" and "neither".
  BigInt total = 0;
  for (long t = 0; t <= excess / 2; ++t) {
    const long neither = q + r - 2 * t - d;
    total += binomial_big(2L * d - q - r + 2 * t, d - (q - t)) *
             binomial_big(d, neither) * ipow(s - 2, neither) *
             binomial_big(k - d, t) * ipow(s - 1, t);
  }
  return total;
}

IntersectionTable build_intersection_table(int k, int m, int s) {
  check_params(k, m, s);
  IntersectionTable table{k, m, s, {}};
  const int t = std::min(2 * m, k);
  const int qmax = std::min(m, k);
  table.values.resize(t + 1);
  for (int d = 0; d <= t; ++d) {
    BigInt sum = 0;
    for (int q = 0; q <= qmax; ++q)
      for (int r = 0; r <= qmax; ++r) sum += n_qr(q, r, d, k, s);
    table.values[d] = std::move(sum);
  }
  return table;
}

int hamming_distance(std::span<const Residue> a, std::span<const Residue> b) {
  if (a.size() != b.size()) {
    throw ValidationError("hamming_distance: length mismatch");
  }
  int d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
  return d;
}

std::uint64_t brute_force_intersection(std::span<const Residue> alpha,
                                       std::span<const Residue> beta, int m,
                                       int s) {
  if (alpha.size() != beta.size() || alpha.empty()) {
    throw ValidationError("brute_force_intersection: k-mers must share k >= 1");
  }
  check_params(static_cast<int>(alpha.size()), m, s);
  const int k = static_cast<int>(alpha.size());
  std::uint64_t space = 1;
  for (int i = 0; i < k; ++i) {
    space *= static_cast<std::uint64_t>(s);
    if (space > kBruteForceCap) {
      throw ValidationError("brute_force_intersection: s^k exceeds cap of " +
                            std::to_string(kBruteForceCap));
    }
  }

  // Odometer over Σ^k, tracking both distances incrementally.
  std::vector<Residue> gamma(alpha.size(), 0);
  int da = 0;
  int db = 0;
  for (int i = 0; i < k; ++i) {
    da += alpha[i] != 0;
    db += beta[i] != 0;
  }
  std::uint64_t count = 0;
  for (std::uint64_t step = 0; step < space; ++step) {
    count += (da <= m && db <= m);
    for (int pos = k - 1; pos >= 0; --pos) {
      const Residue old = gamma[pos];
      const Residue nxt = old + 1 == s ? 0 : static_cast<Residue>(old + 1);
      da += (alpha[pos] != nxt) - (alpha[pos] != old);
      db += (beta[pos] != nxt) - (beta[pos] != old);
      gamma[pos] = nxt;
      if (nxt != 0) break;
    }
  }
  return count;
}

std::uint64_t ball_enumeration_intersection(std::span<const Residue> alpha,
                                            std::span<const Residue> beta,
                                            int m, int s) {
  if (alpha.size() != beta.size() || alpha.empty()) {
    throw ValidationError(
        "ball_enumeration_intersection: k-mers must share k >= 1");
  }
  const int k = static_cast<int>(alpha.size());
  check_params(k, m, s);

  std::vector<Residue> gamma(alpha.begin(), alpha.end());
  std::uint64_t count = 0;
  // Choose mutated positions in increasing order; each mutated position
  // takes one of the s-1 symbols other than alpha's.
  auto visit = [&](auto&& self, int start, int changes) -> void {
    if (hamming_distance(gamma, beta) <= m) ++count;
    if (changes == m) return;
    for (int pos = start; pos < k; ++pos) {
      for (int c = 0; c < s; ++c) {
        if (c == alpha[pos]) continue;
        gamma[pos] = static_cast<Residue>(c);
        self(self, pos + 1, changes + 1);
      }
      gamma[pos] = alpha[pos];
    }
  };
  visit(visit, 0, 0);
  return count;
}

}  // namespace mmk
