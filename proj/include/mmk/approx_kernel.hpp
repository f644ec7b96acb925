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
#include <string>
#include <vector>

#include "mmk/exact_kernel.hpp"
#include "mmk/intersect.hpp"
#include "mmk/rng.hpp"
#include "mmk/seq_model.hpp"

namespace mmk {

enum class SamplingMode { fixed, adaptive };

struct SamplingConfig {
  double epsilon = 0.5;
  double delta = 0.25;
  /// Maximum number of index subsets per distance level.
  int cap = 300;
  SamplingMode mode = SamplingMode::fixed;
  std::uint64_t seed = 0;

  /// Variance target epsilon^2 * delta.
  double variance_target() const { return epsilon * epsilon * delta; }
  /// Throws ValidationError if any field is out of range.
  void validate() const;
};

/// Index subsets B_0..B_t drawn once and shared by every pair of a Gram
/// computation. B_i holds distinct (k-i)-subsets.
struct SampledThetaPlan {
  int k = 0;
  int m = 0;
  int t = 0;
  std::uint64_t seed = 0;
  std::vector<std::vector<IndexSubset>> levels;

  /// True when every level holds its whole population of subsets.
  bool full_coverage() const;
  /// 16 hex digits identifying the subsets drawn.
  std::string digest() const;
};

/// Estimated F and M. Entries of M may be negative.
struct ApproxProfile {
  std::vector<double> F;
  std::vector<double> M;
};

SampledThetaPlan build_theta_plan(int k, int m, const SamplingConfig& config);

ApproxProfile approx_profile(const KmerSet& sx, const KmerSet& sy,
                             const SampledThetaPlan& plan,
                             SortBackend backend = SortBackend::comparison);

/// K' = sum_i I_i * M'_i. Not clamped; a single pair may come out negative.
double approx_kernel(const KmerSet& sx, const KmerSet& sy,
                     const IntersectionTable& table,
                     const SampledThetaPlan& plan,
                     SortBackend backend = SortBackend::comparison);
double approx_kernel_value(const SequenceRecord& x, const SequenceRecord& y,
                           int k, int m, const IntersectionTable& table,
                           const SampledThetaPlan& plan,
                           SortBackend backend = SortBackend::comparison);

struct AdaptiveProfile {
  ApproxProfile profile;
  /// Subsets drawn at each level.
  std::vector<int> iterations;
  /// Final online estimate of Var(F'_i) at each level.
  std::vector<double> variance;
  /// Every level stopped on the variance rule rather than the cap.
  bool target_met = false;
};

/// Online-variance sampling: per level, draw subsets uniformly with
/// replacement until the estimated variance of F'_i drops to
/// epsilon^2 * delta or `cap` draws have been made.
AdaptiveProfile adaptive_profile(const KmerSet& sx, const KmerSet& sy, int m,
                                 const SamplingConfig& config, Rng& rng,
                                 SortBackend backend = SortBackend::comparison);

struct AdaptiveKernel {
  double value = 0.0;
  AdaptiveProfile detail;
};

AdaptiveKernel adaptive_kernel(const KmerSet& sx, const KmerSet& sy,
                               const IntersectionTable& table,
                               const SamplingConfig& config, Rng& rng,
                               SortBackend backend = SortBackend::comparison);

/// M'_i = F'_i - sum_{j<i} C(k-j, k-i) M'_j in floating point.
std::vector<double> estimated_mismatch_counts(const std::vector<double>& F,
                                              int k);

}  // namespace mmk
