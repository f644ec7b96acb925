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

#include "mmk/approx_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>

#include "mmk/combinatorics.hpp"
#include "mmk/error.hpp"

namespace mmk {

namespace {

/// `count` distinct uniform values from [0, population), ascending (Floyd).
std::vector<std::uint64_t> sample_ranks(Rng& rng, std::uint64_t population,
                                        std::uint64_t count) {
  std::set<std::uint64_t> chosen;
  for (std::uint64_t j = population - count; j < population; ++j) {
    const std::uint64_t r = uniform_below(rng, j + 1);
    if (!chosen.insert(r).second) chosen.insert(j);
  }
  return {chosen.begin(), chosen.end()};
}

void check_km(int k, int m) {
  if (k < 1 || k > 62) {
    throw ValidationError("k must be in [1, 62] for sampling, got " +
                          std::to_string(k));
  }
  if (m < 0) throw ValidationError("m must be >= 0");
}

}  // namespace

void SamplingConfig::validate() const {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw ValidationError("epsilon must lie in (0, 1)");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw ValidationError("delta must lie in (0, 1)");
  }
  if (cap < 1) throw ValidationError("sample cap B must be >= 1");
}

bool SampledThetaPlan::full_coverage() const {
  for (int i = 0; i <= t; ++i) {
    if (levels[i].size() != binomial(k, k - i)) return false;
  }
  return true;
}

std::string SampledThetaPlan::digest() const {
  std::uint64_t h = fnv1a("theta-plan");
  for (const auto& level : levels) {
    h = fnv1a("|", h);
    for (const auto& theta : level) h = fnv1a(theta.to_string(), h);
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

SampledThetaPlan build_theta_plan(int k, int m, const SamplingConfig& config) {
  check_km(k, m);
  config.validate();
  SampledThetaPlan plan;
  plan.k = k;
  plan.m = m;
  plan.t = std::min(2 * m, k);
  plan.seed = config.seed;
  plan.levels.resize(plan.t + 1);

  Rng rng(config.seed);
  for (int i = 0; i <= plan.t; ++i) {
    const int width = k - i;
    const std::uint64_t population = binomial(k, width);
    const std::uint64_t count =
        std::min<std::uint64_t>(static_cast<std::uint64_t>(config.cap), population);
    auto& level = plan.levels[i];
    if (count == population) {
      for (auto& positions : all_combinations(k, width))
        level.emplace_back(std::move(positions), k);
    } else {
      for (const std::uint64_t rank : sample_ranks(rng, population, count))
        level.emplace_back(unrank_combination(k, width, rank), k);
    }
  }
  return plan;
}

std::vector<double> estimated_mismatch_counts(const std::vector<double>& F,
                                              int k) {
  std::vector<double> M(F.size());
  for (std::size_t i = 0; i < F.size(); ++i) {
    double value = F[i];
    for (std::size_t j = 0; j < i; ++j) {
      value -= static_cast<double>(binomial(k - static_cast<int>(j),
                                            k - static_cast<int>(i))) *
               M[j];
    }
    M[i] = value;
  }
  return M;
}

ApproxProfile approx_profile(const KmerSet& sx, const KmerSet& sy,
                             const SampledThetaPlan& plan,
                             SortBackend backend) {
  if (sx.k() != plan.k || sy.k() != plan.k) {
    throw ValidationError("sampling plan built for k=" +
                          std::to_string(plan.k) + ", k-mers have k=" +
                          std::to_string(sx.k()));
  }
  ApproxProfile out;
  out.F.assign(plan.t + 1, 0.0);
  for (int i = 0; i <= plan.t; ++i) {
    const auto& level = plan.levels[i];
    std::uint64_t sum = 0;
    for (const auto& theta : level)
      sum = checked_add(sum, f_theta(sx, sy, theta, backend));
    const double population = static_cast<double>(binomial(plan.k, plan.k - i));
    out.F[i] = static_cast<double>(sum) * population /
               static_cast<double>(level.size());
  }
  out.M = estimated_mismatch_counts(out.F, plan.k);
  return out;
}

namespace {

void check_plan_table(const IntersectionTable& table,
                      const SampledThetaPlan& plan) {
  if (table.k != plan.k || table.m != plan.m) {
    throw ValidationError("intersection table (k=" + std::to_string(table.k) +
                          ", m=" + std::to_string(table.m) +
                          ") does not match sampling plan (k=" +
                          std::to_string(plan.k) +
                          ", m=" + std::to_string(plan.m) + ")");
  }
}

double sum_product(const std::vector<double>& M,
                   const IntersectionTable& table) {
  double total = 0.0;
  for (std::size_t i = 0; i < M.size(); ++i)
    total += to_double(table[static_cast<int>(i)]) * M[i];
  return total;
}

}  // namespace

double approx_kernel(const KmerSet& sx, const KmerSet& sy,
                     const IntersectionTable& table,
                     const SampledThetaPlan& plan, SortBackend backend) {
  check_plan_table(table, plan);
  check_table(table, sx, sy);
  return sum_product(approx_profile(sx, sy, plan, backend).M, table);
}

double approx_kernel_value(const SequenceRecord& x, const SequenceRecord& y,
                           int k, int m, const IntersectionTable& table,
                           const SampledThetaPlan& plan, SortBackend backend) {
  if (plan.k != k || plan.m != m) {
    throw ValidationError("sampling plan does not match requested (k, m)");
  }
  return approx_kernel(extract_kmers(x, k), extract_kmers(y, k), table, plan,
                       backend);
}

AdaptiveProfile adaptive_profile(const KmerSet& sx, const KmerSet& sy, int m,
                                 const SamplingConfig& config, Rng& rng,
                                 SortBackend backend) {
  if (sx.k() != sy.k()) throw ValidationError("k-mer sets have mismatched k");
  const int k = sx.k();
  check_km(k, m);
  config.validate();
  const int t = std::min(2 * m, k);
  const double target = config.variance_target();

  AdaptiveProfile out;
  out.profile.F.assign(t + 1, 0.0);
  out.iterations.assign(t + 1, 0);
  out.variance.assign(t + 1, 0.0);
  out.target_met = true;

  for (int i = 0; i <= t; ++i) {
    const int width = k - i;
    const std::uint64_t population = binomial(k, width);
    const double scale = static_cast<double>(population);
    // Welford over scaled samples C(k, k-i) * f_theta.
    double mean = 0.0;
    double m2 = 0.0;
    double estimator_var = std::numeric_limits<double>::infinity();
    int n = 0;
    while (n < config.cap) {
      const auto rank = uniform_below(rng, population);
      const IndexSubset theta(unrank_combination(k, width, rank), k);
      const double x =
          scale * static_cast<double>(f_theta(sx, sy, theta, backend));
      ++n;
      const double d = x - mean;
      mean += d / n;
      m2 += d * (x - mean);
      if (n >= 2) {
        estimator_var = m2 / (n - 1) / n;
        if (estimator_var <= target) break;
      }
    }
    out.profile.F[i] = mean;
    out.iterations[i] = n;
    out.variance[i] = estimator_var;
    out.target_met = out.target_met && estimator_var <= target;
  }
  out.profile.M = estimated_mismatch_counts(out.profile.F, k);
  return out;
}

AdaptiveKernel adaptive_kernel(const KmerSet& sx, const KmerSet& sy,
                               const IntersectionTable& table,
                               const SamplingConfig& config, Rng& rng,
                               SortBackend backend) {
  check_table(table, sx, sy);
  AdaptiveKernel out;
  out.detail = adaptive_profile(sx, sy, table.m, config, rng, backend);
  out.value = sum_product(out.detail.profile.M, table);
  return out;
}

}  // namespace mmk
