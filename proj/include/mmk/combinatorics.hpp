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

#include <boost/multiprecision/cpp_int.hpp>

namespace mmk {

using BigInt = boost::multiprecision::cpp_int;

/// Binomial coefficient C(n, r) with C = 0 whenever n < 0, r < 0 or r > n.
BigInt binomial_big(long n, long r);

/// C(n, r) in 64 bits. Throws NumericError on overflow.
std::uint64_t binomial(int n, int r);

/// a * b and a + b in 64 bits. Throw NumericError on overflow.
std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b);
std::uint64_t checked_add(std::uint64_t a, std::uint64_t b);

/// Advances a strictly increasing combination of {0..n-1} to its
/// lexicographic successor. Returns false after the last combination.
bool next_combination(std::span<int> comb, int n);

/// The combination of size r from {0..n-1} at lexicographic rank `rank`.
std::vector<int> unrank_combination(int n, int r, std::uint64_t rank);

/// Every r-subset of {0..n-1} in lexicographic order.
std::vector<std::vector<int>> all_combinations(int n, int r);

double to_double(const BigInt& value);

}  // namespace mmk
