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

#include "mmk/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "mmk/error.hpp"

namespace mmk {

void MinimizerParams::validate() const {
  if (m_len < 1 || m_len >= k) {
    throw ValidationError("minimizer parameters need 1 <= m_len < k (k=" +
                          std::to_string(k) + ", m_len=" +
                          std::to_string(m_len) + ")");
  }
}

Mmer canonical_mmer(std::span<const Residue> mmer) {
  Mmer forward(mmer.begin(), mmer.end());
  Mmer reverse(mmer.rbegin(), mmer.rend());
  return std::min(forward, reverse);
}

std::vector<Mmer> minimizers(const SequenceRecord& seq,
                             const MinimizerParams& params) {
  params.validate();
  const auto len = seq.residues.size();
  const auto k = static_cast<std::size_t>(params.k);
  const auto mlen = static_cast<std::size_t>(params.m_len);
  if (len < k) return {};

  std::vector<Mmer> canon;
  canon.reserve(len - mlen + 1);
  for (std::size_t p = 0; p + mlen <= len; ++p) {
    canon.push_back(canonical_mmer(
        std::span<const Residue>(seq.residues).subspan(p, mlen)));
  }

  const std::size_t per_window = k - mlen + 1;
  std::vector<Mmer> out;
  out.reserve(len - k + 1);
  std::size_t best = 0;
  for (std::size_t w = 0; w + k <= len; ++w) {
    if (w == 0 || best < w) {
      // Current minimizer left the window: rescan, keeping the leftmost.
      best = w;
      for (std::size_t p = w + 1; p < w + per_window; ++p) {
        if (canon[p] < canon[best]) best = p;
      }
    } else {
      const std::size_t incoming = w + per_window - 1;
      if (canon[incoming] < canon[best]) best = incoming;
    }
    out.push_back(canon[best]);
  }
  return out;
}

SequenceRecord ordered_minimizer_sequence(const SequenceRecord& seq,
                                          const MinimizerParams& params) {
  SequenceRecord out{seq.id, {}, seq.label};
  for (const auto& mm : minimizers(seq, params)) {
    out.residues.insert(out.residues.end(), mm.begin(), mm.end());
  }
  return out;
}

namespace {

double entropy_bits(const std::vector<std::size_t>& counts, std::size_t total) {
  double h = 0.0;
  for (const std::size_t c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / static_cast<double>(total);
    h -= p * std::log2(p);
  }
  return h;
}

/// Label of every record as a dense class index (labels in sorted order).
std::vector<std::size_t> class_indices(std::span<const SequenceRecord> dataset,
                                       std::size_t& num_classes) {
  std::map<std::string, std::size_t> classes;
  for (const auto& rec : dataset) {
    if (!rec.label) {
      throw ValidationError("sequence '" + rec.id +
                            "' has no class label; information gain needs "
                            "labeled data");
    }
    classes.emplace(*rec.label, 0);
  }
  std::size_t next = 0;
  for (auto& [label, idx] : classes) idx = next++;
  num_classes = classes.size();
  std::vector<std::size_t> out;
  out.reserve(dataset.size());
  for (const auto& rec : dataset) out.push_back(classes.at(*rec.label));
  return out;
}

std::size_t common_length(std::span<const SequenceRecord> dataset) {
  if (dataset.empty()) throw ValidationError("empty dataset");
  const std::size_t len = dataset.front().residues.size();
  for (const auto& rec : dataset) {
    if (rec.residues.size() != len) {
      throw ValidationError("sequences must be aligned to equal length: '" +
                            dataset.front().id + "' has " +
                            std::to_string(len) + ", '" + rec.id + "' has " +
                            std::to_string(rec.residues.size()));
    }
  }
  return len;
}

double gain_at(std::span<const SequenceRecord> dataset,
               const std::vector<std::size_t>& cls, std::size_t num_classes,
               double class_entropy, std::size_t position) {
  // counts[symbol][class]
  std::vector<std::vector<std::size_t>> counts(
      256, std::vector<std::size_t>(num_classes, 0));
  std::vector<std::size_t> symbol_totals(256, 0);
  for (std::size_t r = 0; r < dataset.size(); ++r) {
    const Residue sym = dataset[r].residues[position];
    ++counts[sym][cls[r]];
    ++symbol_totals[sym];
  }
  const double n = static_cast<double>(dataset.size());
  double conditional = 0.0;
  for (std::size_t sym = 0; sym < 256; ++sym) {
    if (symbol_totals[sym] == 0) continue;
    conditional += static_cast<double>(symbol_totals[sym]) / n *
                   entropy_bits(counts[sym], symbol_totals[sym]);
  }
  return std::max(0.0, class_entropy - conditional);
}

double class_entropy_of(const std::vector<std::size_t>& cls,
                        std::size_t num_classes) {
  std::vector<std::size_t> totals(num_classes, 0);
  for (const std::size_t c : cls) ++totals[c];
  return entropy_bits(totals, cls.size());
}

}  // namespace

double information_gain(std::span<const SequenceRecord> dataset,
                        std::size_t position) {
  const std::size_t len = common_length(dataset);
  if (position >= len) {
    throw ValidationError("position " + std::to_string(position) +
                          " beyond sequence length " + std::to_string(len));
  }
  std::size_t num_classes = 0;
  const auto cls = class_indices(dataset, num_classes);
  return gain_at(dataset, cls, num_classes, class_entropy_of(cls, num_classes),
                 position);
}

std::vector<PositionScore> information_gain_scores(
    std::span<const SequenceRecord> dataset) {
  const std::size_t len = common_length(dataset);
  std::size_t num_classes = 0;
  const auto cls = class_indices(dataset, num_classes);
  const double h = class_entropy_of(cls, num_classes);
  std::vector<PositionScore> scores(len);
  for (std::size_t p = 0; p < len; ++p) {
    scores[p] = {p, gain_at(dataset, cls, num_classes, h, p)};
  }
  return scores;
}

PositionSelection select_top_positions(std::span<const SequenceRecord> dataset,
                                       std::size_t top_t) {
  const std::size_t len = common_length(dataset);
  if (top_t > len) {
    throw ValidationError("cannot keep " + std::to_string(top_t) +
                          " positions of sequences with length " +
                          std::to_string(len));
  }
  auto ranked = information_gain_scores(dataset);
  // Gains equal to within 1e-12 bits count as ties; the lower position wins.
  auto key = [](const PositionScore& s) { return std::llround(s.ig * 1e12); };
  std::stable_sort(ranked.begin(), ranked.end(),
                   [&](const PositionScore& a, const PositionScore& b) {
                     return key(a) > key(b);
                   });
  ranked.resize(top_t);
  std::sort(ranked.begin(), ranked.end(),
            [](const PositionScore& a, const PositionScore& b) {
              return a.position < b.position;
            });

  PositionSelection out;
  out.scores = ranked;
  for (const auto& s : ranked) out.positions.push_back(s.position);
  out.dataset.reserve(dataset.size());
  for (const auto& rec : dataset) {
    SequenceRecord reduced{rec.id, {}, rec.label};
    reduced.residues.reserve(top_t);
    for (const std::size_t p : out.positions)
      reduced.residues.push_back(rec.residues[p]);
    out.dataset.push_back(std::move(reduced));
  }
  return out;
}

std::string to_string(PipelineVariant variant) {
  switch (variant) {
    case PipelineVariant::plain: return "plain";
    case PipelineVariant::omk: return "omk";
    case PipelineVariant::igk: return "igk";
    case PipelineVariant::omk_ig: return "omk_ig";
  }
  return "plain";
}

PipelineVariant parse_variant(const std::string& name) {
  std::string lower;
  for (const char c : name) {
    lower.push_back(c == '+' || c == '-' ? '_' : static_cast<char>(std::tolower(
                                                     static_cast<unsigned char>(c))));
  }
  if (lower == "plain") return PipelineVariant::plain;
  if (lower == "omk") return PipelineVariant::omk;
  if (lower == "igk") return PipelineVariant::igk;
  if (lower == "omk_ig") return PipelineVariant::omk_ig;
  throw ValidationError("unknown pipeline variant '" + name +
                        "' (expected plain, omk, igk or omk_ig)");
}

std::size_t default_top(PipelineVariant variant) {
  switch (variant) {
    case PipelineVariant::igk: return 243;
    case PipelineVariant::omk_ig: return 2184;
    default: return 0;
  }
}

PipelineResult pipeline(std::span<const SequenceRecord> dataset,
                        PipelineVariant variant, const PipelineParams& params) {
  PipelineResult out;
  out.variant = variant;
  const bool uses_ig =
      variant == PipelineVariant::igk || variant == PipelineVariant::omk_ig;
  if (uses_ig) {
    for (const auto& rec : dataset) {
      if (!rec.label) {
        throw ValidationError("variant " + to_string(variant) +
                              " needs class labels; '" + rec.id +
                              "' is unlabeled");
      }
    }
  }

  std::vector<SequenceRecord> current(dataset.begin(), dataset.end());
  if (variant == PipelineVariant::omk || variant == PipelineVariant::omk_ig) {
    params.minimizer.validate();
    for (auto& rec : current) rec = ordered_minimizer_sequence(rec, params.minimizer);
  }
  if (uses_ig) {
    auto selection = select_top_positions(
        current, params.top_t.value_or(default_top(variant)));
    out.positions = std::move(selection.positions);
    out.scores = std::move(selection.scores);
    current = std::move(selection.dataset);
  }
  out.dataset = std::move(current);
  return out;
}

}  // namespace mmk
