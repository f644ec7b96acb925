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
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include "json.hpp"

#include "mmk/approx_kernel.hpp"
#include "mmk/exact_kernel.hpp"
#include "mmk/seq_model.hpp"

namespace mmk {

enum class KernelMethod { exact, approx };

std::string to_string(KernelMethod method);
std::string to_string(SamplingMode mode);

struct GramMeta {
  KernelMethod method = KernelMethod::exact;
  int k = 3;
  int m = 0;
  std::string alphabet;
  SamplingConfig sampling;
  /// Empty for exact and adaptive runs.
  std::string plan_digest;
};

nlohmann::ordered_json to_json(const GramMeta& meta);

struct GramMatrix {
  std::vector<std::string> ids;
  Eigen::MatrixXd values;
  GramMeta meta;

  Eigen::Index size() const { return values.rows(); }
};

struct GramOptions {
  int k = 3;
  int m = 0;
  KernelMethod method = KernelMethod::exact;
  SamplingConfig sampling;
  int threads = 1;
  SortBackend backend = SortBackend::comparison;
};

/// Kernel values for every unordered pair, self-pairs included, mirrored
/// into a full matrix. The approximate method draws one sampling plan and
/// reuses it for every pair. Output does not depend on options.threads.
GramMatrix compute_gram(std::span<const SequenceRecord> dataset,
                        const Alphabet& alphabet, const GramOptions& options);

double min_eigenvalue(const GramMatrix& gram);

GramMatrix center_gram(const GramMatrix& gram);

struct Embedding {
  std::vector<std::string> ids;
  /// N x c; row i is the embedding of sequence i.
  Eigen::MatrixXd vectors;
  /// Non-increasing, non-negative.
  Eigen::VectorXd eigenvalues;

  int components() const { return static_cast<int>(eigenvalues.size()); }
};

/// Relative tolerance below which negative eigenvalues are treated as 0.
inline constexpr double kPsdTolerance = 1e-8;

/// Centers the Gram matrix and keeps the top c eigenpairs. Row i of the
/// embedding is (sqrt(l_1) v_1[i], ..., sqrt(l_c) v_c[i]). Throws
/// NumericError if a kept eigenvalue is below -kPsdTolerance * max|l|.
Embedding kernel_pca(const GramMatrix& gram, int components);

/// Default component count: 50, clamped to N - 1 (and at least 1).
int default_components(Eigen::Index n);

/// Text matrix plus `<path>.json` sidecar with the meta block.
void write_gram(const std::filesystem::path& path, const GramMatrix& gram);
/// Reads the text matrix; meta is filled from the sidecar when present.
GramMatrix read_gram(const std::filesystem::path& path);

void write_embedding(const std::filesystem::path& path,
                     const Embedding& embedding);

std::filesystem::path sidecar_path(const std::filesystem::path& path);

}  // namespace mmk
