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

#include <cmath>
#include <cstring>
#include <map>
#include <set>

#include "doctest.h"
#include "mmk/approx_kernel.hpp"
#include "mmk/error.hpp"
#include "oracles.hpp"

using namespace mmk;
using test::dna_kmers;
using test::dna_record;

namespace {

SamplingConfig config_with(int cap, std::uint64_t seed) {
  SamplingConfig c;
  c.cap = cap;
  c.seed = seed;
  return c;
}

SampledThetaPlan manual_plan(int k, int m,
                             std::vector<std::vector<std::vector<int>>> levels) {
  SampledThetaPlan plan;
  plan.k = k;
  plan.m = m;
  plan.t = std::min(2 * m, k);
  for (auto& level : levels) {
    plan.levels.emplace_back();
    for (auto& theta : level) plan.levels.back().emplace_back(theta, k);
  }
  return plan;
}

}  // namespace

TEST_CASE("sampling config validation") {
  SamplingConfig c;
  CHECK_NOTHROW(c.validate());
  CHECK(c.variance_target() == doctest::Approx(0.0625));
  c.epsilon = 1.0;
  CHECK_THROWS_AS(c.validate(), ValidationError);
  c = {};
  c.delta = 0.0;
  CHECK_THROWS_AS(c.validate(), ValidationError);
  c = {};
  c.cap = 0;
  CHECK_THROWS_AS(c.validate(), ValidationError);
}

TEST_CASE("theta plans") {
  SUBCASE("population exhausted") {
    const auto plan = build_theta_plan(3, 1, config_with(3, 9));
    REQUIRE(plan.levels.size() == 3);
    CHECK(plan.levels[0].size() == 1);
    CHECK(plan.levels[1].size() == 3);
    CHECK(plan.levels[2].size() == 3);
    CHECK(plan.full_coverage());
  }
  SUBCASE("cap binds") {
    const auto plan = build_theta_plan(3, 1, config_with(1, 9));
    for (const auto& level : plan.levels) CHECK(level.size() == 1);
    CHECK_FALSE(plan.full_coverage());
  }
  SUBCASE("deterministic") {
    const auto a = build_theta_plan(10, 3, config_with(7, 123));
    const auto b = build_theta_plan(10, 3, config_with(7, 123));
    CHECK(a.levels == b.levels);
    CHECK(a.digest() == b.digest());
    CHECK(a.digest() != build_theta_plan(10, 3, config_with(7, 124)).digest());
  }
  SUBCASE("distinct subsets of the right width") {
    const auto plan = build_theta_plan(12, 4, config_with(50, 1));
    for (int i = 0; i <= plan.t; ++i) {
      const auto& level = plan.levels[i];
      CHECK(level.size() == std::min<std::uint64_t>(50, binomial(12, 12 - i)));
      std::set<IndexSubset> unique(level.begin(), level.end());
      CHECK(unique.size() == level.size());
      for (const auto& theta : level) CHECK(theta.size() == 12 - i);
    }
  }
}

TEST_CASE("each subset is marginally uniform under capped sampling") {
  // C(5, 3) = 10 subsets, 3 drawn per plan: each appears with probability 0.3.
  constexpr int runs = 4000;
  std::map<IndexSubset, int> hits;
  for (int seed = 0; seed < runs; ++seed) {
    const auto plan = build_theta_plan(5, 1, config_with(3, seed));
    for (const auto& theta : plan.levels[2]) ++hits[theta];
  }
  CHECK(hits.size() == 10);
  const double expected = 0.3 * runs;
  const double sd = std::sqrt(runs * 0.3 * 0.7);
  for (const auto& [theta, n] : hits) {
    CHECK(std::abs(n - expected) < 5 * sd);
  }
}

TEST_CASE("approximate profile on hand-built plans") {
  const auto sx = dna_kmers("ACGT", 3);
  const auto sy = dna_kmers("ACGA", 3);
  const auto table = build_intersection_table(3, 1, 4);

  const auto plan = manual_plan(3, 1, {{{0, 1, 2}}, {{0, 1}}, {{2}}});
  const auto p = approx_profile(sx, sy, plan);
  CHECK(p.F[1] == 6.0);
  CHECK(p.M[1] == 3.0);
  CHECK(p.F[2] == 3.0);
  CHECK(p.M[2] == -6.0);
  CHECK(approx_kernel(sx, sy, table, plan) == 10.0);

  const auto full = build_theta_plan(3, 1, config_with(300, 0));
  const auto pf = approx_profile(sx, sy, full);
  CHECK(pf.M == std::vector<double>{1, 1, 0});
  CHECK(approx_kernel_value(dna_record("x", "ACGT"), dna_record("y", "ACGA"), 3, 1,
                            table, full) == 14.0);

  const auto empty = approx_profile(dna_kmers("AC", 3), sy, plan);
  CHECK(empty.F == std::vector<double>{0, 0, 0});
  CHECK(empty.M == std::vector<double>{0, 0, 0});

  CHECK_THROWS_AS(approx_kernel(sx, sy, build_intersection_table(3, 2, 4), plan),
                  ValidationError);
  CHECK_THROWS_AS(approx_profile(dna_kmers("ACGT", 2), dna_kmers("ACGT", 2), plan),
                  ValidationError);
}

TEST_CASE("m = 0 has no sampling variance") {
  Rng rng(4);
  const SequenceRecord x{"x", test::random_residues(rng, 50, 4), {}};
  const SequenceRecord y{"y", test::random_residues(rng, 50, 4), {}};
  const auto table = build_intersection_table(3, 0, 4);
  const auto plan = build_theta_plan(3, 0, config_with(1, 77));
  CHECK(approx_kernel_value(x, y, 3, 0, table, plan) ==
        static_cast<double>(test::spectrum_inner_product(x.residues, y.residues, 3)));
}

TEST_CASE("identical inputs and seed give bit-identical estimates") {
  Rng rng(6);
  const auto sx = extract_kmers(test::random_residues(rng, 80, 4), 8);
  const auto sy = extract_kmers(test::random_residues(rng, 80, 4), 8);
  const auto table = build_intersection_table(8, 3, 4);
  const double a = approx_kernel(sx, sy, table, build_theta_plan(8, 3, config_with(4, 5)));
  const double b = approx_kernel(sx, sy, table, build_theta_plan(8, 3, config_with(4, 5)));
  CHECK(std::memcmp(&a, &b, sizeof a) == 0);

  SamplingConfig cfg = config_with(20, 5);
  cfg.mode = SamplingMode::adaptive;
  Rng r1(99), r2(99);
  const double c = adaptive_kernel(sx, sy, table, cfg, r1).value;
  const double d = adaptive_kernel(sx, sy, table, cfg, r2).value;
  CHECK(std::memcmp(&c, &d, sizeof c) == 0);
}

TEST_CASE("fixed-mode estimates are unbiased on a small instance") {
  const auto sx = dna_kmers("ACGTTGCAAGT", 4);
  const auto sy = dna_kmers("ACGATGCTAGA", 4);
  const auto table = build_intersection_table(4, 2, 4);
  const double exact = to_double(exact_kernel(sx, sy, table));
  const auto exact_m = exact_profile(sx, sy, 2).M;

  constexpr int runs = 2000;
  double sum = 0, sum_sq = 0;
  std::vector<double> m_sum(5, 0.0), m_sq(5, 0.0);
  for (int r = 0; r < runs; ++r) {
    const auto plan = build_theta_plan(4, 2, config_with(2, r));
    const auto p = approx_profile(sx, sy, plan);
    double kv = 0;
    for (int i = 0; i <= 4; ++i) {
      kv += to_double(table[i]) * p.M[i];
      m_sum[i] += p.M[i];
      m_sq[i] += p.M[i] * p.M[i];
    }
    sum += kv;
    sum_sq += kv * kv;
  }
  auto within = [&](double s, double sq, double truth) {
    const double mean = s / runs;
    const double var = (sq - runs * mean * mean) / (runs - 1);
    const double se = std::sqrt(std::max(var, 0.0) / runs);
    return std::abs(mean - truth) <= 4 * se + 1e-9;
  };
  CHECK(within(sum, sum_sq, exact));
  for (int i = 0; i <= 4; ++i) {
    CHECK(within(m_sum[i], m_sq[i], static_cast<double>(exact_m[i])));
  }
}

TEST_CASE("adaptive stopping rule") {
  const auto same = dna_kmers("AAAA", 3);  // {AAA, AAA}
  SamplingConfig cfg = config_with(50, 3);
  cfg.mode = SamplingMode::adaptive;

  SUBCASE("constant f_theta stops after two draws") {
    Rng rng(1);
    const auto out = adaptive_profile(same, same, 1, cfg, rng);
    CHECK(out.iterations == std::vector<int>{2, 2, 2});
    CHECK(out.target_met);
    CHECK(out.profile.M == std::vector<double>{4, 0, 0});
  }
  SUBCASE("loose target also stops at two") {
    cfg.epsilon = 0.99;
    cfg.delta = 0.99;
    Rng rng(1);
    CHECK(adaptive_profile(same, same, 1, cfg, rng).iterations ==
          std::vector<int>{2, 2, 2});
  }
  SUBCASE("cap ends the loop") {
    Rng rng(1);
    const auto sx = dna_kmers("ACGTTGCAAGTCCA", 5);
    const auto sy = dna_kmers("TTGACCAGTAGCAT", 5);
    cfg.cap = 7;
    const auto out = adaptive_profile(sx, sy, 2, cfg, rng);
    for (int i = 1; i <= 4; ++i) CHECK(out.iterations[i] <= 7);
    cfg.cap = 1;
    const auto one = adaptive_profile(sx, sy, 2, cfg, rng);
    CHECK(one.iterations == std::vector<int>{1, 1, 1, 1, 1});
    CHECK_FALSE(one.target_met);
  }
}
