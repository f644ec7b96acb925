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

#include "doctest.h"
#include "mmk/error.hpp"
#include "mmk/exact_kernel.hpp"
#include "oracles.hpp"

using namespace mmk;
using test::dna_kmers;
using test::dna_record;

TEST_CASE("index subsets") {
  CHECK(IndexSubset({0, 2}, 3).to_string() == "{1,3}");
  CHECK_THROWS_AS(IndexSubset({1, 1}, 3), ValidationError);
  CHECK_THROWS_AS(IndexSubset({0, 3}, 3), ValidationError);
}

TEST_CASE("f_theta on the toy pair") {
  const auto sx = dna_kmers("ACGT", 3);
  const auto sy = dna_kmers("ACGA", 3);
  for (const auto backend : {SortBackend::comparison, SortBackend::counting}) {
    CHECK(f_theta(sx, sy, IndexSubset({0, 1}, 3), backend) == 2);
    CHECK(f_theta(sx, sy, IndexSubset({0, 1, 2}, 3), backend) == 1);
    CHECK(f_theta(sx, sy, IndexSubset({}, 3), backend) == 4);
  }
  CHECK_THROWS_AS(f_theta(sx, dna_kmers("ACGT", 2), IndexSubset({0}, 3)),
                  ValidationError);
}

TEST_CASE("f_theta agrees with the direct count on random multisets") {
  Rng rng(17);
  for (int rep = 0; rep < 200; ++rep) {
    const int s = rep % 3 == 0 ? 20 : (rep % 3 == 1 ? 4 : 2);
    const int k = 1 + static_cast<int>(uniform_below(rng, 7));
    const auto sx = extract_kmers(test::random_residues(rng, uniform_below(rng, 40), s), k);
    const auto sy = extract_kmers(test::random_residues(rng, uniform_below(rng, 40), s), k);
    const int width = static_cast<int>(uniform_below(rng, k + 1));
    const auto theta = unrank_combination(k, width, uniform_below(rng, binomial(k, width)));
    const auto expected = test::direct_f_theta(sx, sy, theta);
    CHECK(f_theta(sx, sy, IndexSubset(theta, k), SortBackend::comparison) == expected);
    CHECK(f_theta(sx, sy, IndexSubset(theta, k), SortBackend::counting, s) == expected);
  }
}

TEST_CASE("f_theta falls back to index sorting for wide keys") {
  // 20 protein positions need 100 bits, past a packed 64-bit key.
  Rng rng(23);
  const int k = 20;
  const auto sx = extract_kmers(test::random_residues(rng, 60, 2), k);
  auto ys = test::random_residues(rng, 60, 2);
  ys[30] = 19;
  const auto sy = extract_kmers(ys, k);
  std::vector<int> theta(k);
  for (int i = 0; i < k; ++i) theta[i] = i;
  theta.erase(theta.begin() + 3);
  const auto expected = test::direct_f_theta(sx, sy, theta);
  CHECK(f_theta(sx, sy, IndexSubset(theta, k)) == expected);
  CHECK(f_theta(sx, sy, IndexSubset(theta, k), SortBackend::counting) == expected);
}

TEST_CASE("exact profile on the toy pair") {
  const auto sx = dna_kmers("ACGT", 3);
  const auto sy = dna_kmers("ACGA", 3);
  const auto p = exact_profile(sx, sy, 1);
  CHECK(p.t == 2);
  CHECK(p.F == std::vector<std::uint64_t>{1, 4, 5});
  CHECK(p.M == std::vector<std::uint64_t>{1, 1, 0});

  CHECK(exact_profile(dna_kmers("AAA", 3), dna_kmers("AAA", 3), 1).M ==
        std::vector<std::uint64_t>{1, 0, 0});
  CHECK(exact_profile(dna_kmers("AAA", 3), dna_kmers("TTT", 3), 1).M ==
        std::vector<std::uint64_t>{0, 0, 0});
  CHECK(exact_profile(dna_kmers("AC", 3), dna_kmers("ACGT", 3), 2).M ==
        std::vector<std::uint64_t>{0, 0, 0, 0});
}

TEST_CASE("brute-force profile") {
  CHECK(brute_force_profile(dna_kmers("ACGT", 3), dna_kmers("ACGA", 3)) ==
        std::vector<std::uint64_t>{1, 1, 0, 2});
  CHECK(brute_force_profile(dna_kmers("AC", 3), dna_kmers("ACGA", 3)) ==
        std::vector<std::uint64_t>{0, 0, 0, 0});
  Rng rng(2);
  const auto a = extract_kmers(test::random_residues(rng, 25, 4), 4);
  const auto b = extract_kmers(test::random_residues(rng, 19, 4), 4);
  CHECK(brute_force_profile(a, b) == brute_force_profile(b, a));
}

TEST_CASE("exact kernel values") {
  const auto table31 = build_intersection_table(3, 1, 4);
  const auto x = dna_record("x", "ACGT");
  const auto y = dna_record("y", "ACGA");
  CHECK(exact_kernel(x, y, 3, 1, table31) == 14);
  CHECK(exact_kernel_value(x, y, 3, 1, table31) == 14.0);
  CHECK(brute_force_kernel(x, y, 3, 1, 4) == 14);
  CHECK(brute_force_kernel(dna_record("a", "ACG"), dna_record("b", "ACG"), 3, 1, 4) == 10);

  const auto table30 = build_intersection_table(3, 0, 4);
  CHECK(exact_kernel_value(x, x, 3, 0, table30) == 2.0);
  CHECK(exact_kernel_value(dna_record("s", "AC"), y, 3, 1, table31) == 0.0);

  CHECK_THROWS_AS(exact_kernel(x, y, 3, 2, table31), ValidationError);
  CHECK_THROWS_AS(exact_kernel(x, y, 4, 1, table31), ValidationError);
  const auto binary = build_intersection_table(3, 1, 2);
  CHECK_THROWS_AS(exact_kernel(x, dna_record("t", "TTTT"), 3, 1, binary),
                  ValidationError);
}

TEST_CASE("profile identity, symmetry and oracle equivalence on random instances") {
  Rng rng(41);
  for (int rep = 0; rep < 60; ++rep) {
    const int s = rep % 2 ? 4 : 2;
    const int k = 1 + static_cast<int>(uniform_below(rng, 6));
    const int m = static_cast<int>(uniform_below(rng, 3));
    const SequenceRecord x{"x", test::random_residues(rng, uniform_below(rng, 41), s), {}};
    const SequenceRecord y{"y", test::random_residues(rng, uniform_below(rng, 41), s), {}};
    const auto sx = extract_kmers(x, k);
    const auto sy = extract_kmers(y, k);

    const auto p = exact_profile(sx, sy, m);
    for (int i = 0; i <= p.t; ++i) {
      std::uint64_t rhs = 0;
      for (int j = 0; j <= i; ++j) rhs += binomial(k - j, k - i) * p.M[j];
      CHECK(p.F[i] == rhs);
    }
    const auto hist = brute_force_profile(sx, sy);
    for (int i = 0; i <= p.t; ++i) CHECK(p.M[i] == hist[i]);
    if (p.t == k) {
      std::uint64_t total = 0;
      for (const auto v : p.M) total += v;
      CHECK(total == sx.size() * sy.size());
    }
    CHECK(exact_profile(sx, sy, m, SortBackend::counting).M == p.M);

    const auto table = build_intersection_table(k, m, s);
    const BigInt kxy = exact_kernel(x, y, k, m, table);
    CHECK(kxy == exact_kernel(y, x, k, m, table));
    CHECK(kxy == brute_force_kernel(x, y, k, m, s));
  }
}

TEST_CASE("m = 0 reduces to the spectrum kernel") {
  Rng rng(8);
  for (int rep = 0; rep < 40; ++rep) {
    const int k = 1 + static_cast<int>(uniform_below(rng, 5));
    const auto xs = test::random_residues(rng, uniform_below(rng, 60), 4);
    const auto ys = test::random_residues(rng, uniform_below(rng, 60), 4);
    const auto table = build_intersection_table(k, 0, 4);
    CHECK(exact_kernel(extract_kmers(xs, k), extract_kmers(ys, k), table) ==
          test::spectrum_inner_product(xs, ys, k));
  }
}
