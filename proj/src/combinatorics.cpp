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

#include "mmk/combinatorics.hpp"

#include <numeric>
#include <string>

#include "mmk/error.hpp"

namespace mmk {

BigInt binomial_big(long n, long r) {
  if (n < 0 || r < 0 || r > n) return 0;
  r = std::min(r, n - r);
  BigInt result = 1;
  for (long i = 1; i <= r; ++i) {
    result *= n - r + i;
    result /= i;
  }
  return result;
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) {
    throw NumericError("64-bit overflow in product " + std::to_string(a) +
                       " * " + std::to_string(b));
  }
  return out;
}

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out = 0;
  if (__builtin_add_overflow(a, b, &out)) {
    throw NumericError("64-bit overflow in sum " + std::to_string(a) + " + " +
                       std::to_string(b));
  }
  return out;
}

std::uint64_t binomial(int n, int r) {
  if (n < 0 || r < 0 || r > n) return 0;
  r = std::min(r, n - r);
  std::uint64_t result = 1;
  for (int i = 1; i <= r; ++i) {
    // result * (n - r + i) is divisible by i; reduce by the gcd first so the
    // intermediate product stays as small as possible.
    std::uint64_t num = static_cast<std::uint64_t>(n - r + i);
    std::uint64_t den = static_cast<std::uint64_t>(i);
    const std::uint64_t g = std::gcd(result, den);
    result /= g;
    den /= g;
    num /= den;
    result = checked_mul(result, num);
  }
  return result;
}

bool next_combination(std::span<int> comb, int n) {
  const int r = static_cast<int>(comb.size());
  int i = r - 1;
  while (i >= 0 && comb[i] == n - r + i) --i;
  if (i < 0) return false;
  ++comb[i];
  for (int j = i + 1; j < r; ++j) comb[j] = comb[j - 1] + 1;
  return true;
}

std::vector<int> unrank_combination(int n, int r, std::uint64_t rank) {
  std::vector<int> comb;
  comb.reserve(r);
  int next = 0;
  for (int slot = 0; slot < r; ++slot) {
    // Count combinations that start with `next` at this slot; skip whole
    // blocks until the rank falls inside one.
    for (;;) {
      const std::uint64_t block = binomial(n - next - 1, r - slot - 1);
      if (rank < block) break;
      rank -= block;
      ++next;
    }
    comb.push_back(next);
    ++next;
  }
  return comb;
}

std::vector<std::vector<int>> all_combinations(int n, int r) {
  std::vector<std::vector<int>> out;
  if (r < 0 || r > n) return out;
  std::vector<int> comb(r);
  std::iota(comb.begin(), comb.end(), 0);
  do {
    out.push_back(comb);
  } while (next_combination(comb, n));
  return out;
}

double to_double(const BigInt& value) { return value.convert_to<double>(); }

}  // namespace mmk
