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

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mmk/seq_model.hpp"

namespace mmk {

struct MinimizerParams {
  int k = 9;
  int m_len = 3;

  void validate() const;
};

using Mmer = std::vector<Residue>;

/// min(mmer, reverse(mmer)) under symbol-index lexicographic order.
Mmer canonical_mmer(std::span<const Residue> mmer);

/// One minimizer per k-window, in window order: the smallest canonical
/// m-mer of the window, leftmost on ties. Empty when the sequence is
/// shorter than k.
std::vector<Mmer> minimizers(const SequenceRecord& seq,
                             const MinimizerParams& params);

/// Concatenated minimizers; length (L - k + 1) * m_len. Id and label kept.
SequenceRecord ordered_minimizer_sequence(const SequenceRecord& seq,
                                          const MinimizerParams& params);

struct PositionScore {
  std::size_t position = 0;
  double ig = 0.0;  // bits
};

/// H(Class) - H(Class | symbol at position), log base 2. Requires labeled,
/// equal-length records.
double information_gain(std::span<const SequenceRecord> dataset,
                        std::size_t position);

/// Information gain of every position, in position order.
std::vector<PositionScore> information_gain_scores(
    std::span<const SequenceRecord> dataset);

struct PositionSelection {
  /// Selected positions, ascending.
  std::vector<std::size_t> positions;
  /// Scores of the selected positions, same order as `positions`.
  std::vector<PositionScore> scores;
  /// Input records reduced to the selected positions.
  std::vector<SequenceRecord> dataset;
};

/// Keeps the top_t positions by information gain (ties go to the lower
/// position) and cuts every record down to them in original order.
PositionSelection select_top_positions(std::span<const SequenceRecord> dataset,
                                       std::size_t top_t);

enum class PipelineVariant { plain, omk, igk, omk_ig };

std::string to_string(PipelineVariant variant);
PipelineVariant parse_variant(const std::string& name);

/// 243 for igk, 2184 for omk_ig, 0 otherwise.
std::size_t default_top(PipelineVariant variant);

struct PipelineParams {
  MinimizerParams minimizer;
  /// Positions kept by the IG step; default_top(variant) when unset.
  std::optional<std::size_t> top_t;
};

struct PipelineResult {
  PipelineVariant variant = PipelineVariant::plain;
  std::vector<SequenceRecord> dataset;
  /// Filled for igk and omk_ig.
  std::vector<std::size_t> positions;
  std::vector<PositionScore> scores;
};

PipelineResult pipeline(std::span<const SequenceRecord> dataset,
                        PipelineVariant variant, const PipelineParams& params);

}  // namespace mmk
