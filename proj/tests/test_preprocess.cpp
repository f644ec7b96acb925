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

#include <algorithm>
#include <cmath>
#include <set>

#include "doctest.h"
#include "mmk/error.hpp"
#include "mmk/preprocess.hpp"
#include "oracles.hpp"

using namespace mmk;

namespace {

const Alphabet& letters() {
  static const Alphabet a = Alphabet::from_symbols("ABCDX");
  return a;
}

SequenceRecord rec(const std::string& id, const std::string& text,
                   std::optional<std::string> label = std::nullopt) {
  return {id, letters().encode(text), std::move(label)};
}

std::string text(const Mmer& m) { return letters().decode(m); }

std::vector<SequenceRecord> toy_ig() {
  // Position 0 separates the classes, position 1 carries nothing,
  // position 2 is balanced within each class.
  return {rec("a", "AAA", "c1"), rec("b", "AAB", "c1"), rec("c", "BAA", "c2"),
          rec("d", "BAB", "c2")};
}

std::vector<SequenceRecord> random_labeled(Rng& rng, std::size_t n, std::size_t len,
                                           int symbols, int classes) {
  std::vector<SequenceRecord> out;
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back({"r" + std::to_string(i), test::random_residues(rng, len, symbols),
                   "c" + std::to_string(uniform_below(rng, classes))});
  }
  return out;
}

}  // namespace

TEST_CASE("canonical m-mers") {
  CHECK(text(canonical_mmer(letters().encode("CB"))) == "BC");
  CHECK(text(canonical_mmer(letters().encode("AB"))) == "AB");
  CHECK(text(canonical_mmer(letters().encode("AA"))) == "AA");
}

TEST_CASE("minimizers") {
  const MinimizerParams p{4, 2};
  const auto mins = minimizers(rec("s", "CBADX"), p);
  REQUIRE(mins.size() == 2);
  CHECK(text(mins[0]) == "AB");
  CHECK(text(mins[1]) == "AB");
  CHECK(letters().decode(ordered_minimizer_sequence(rec("s", "CBADX"), p).residues) ==
        "ABAB");

  for (const auto& m : minimizers(rec("s", std::string(30, 'A')), MinimizerParams{7, 3}))
    CHECK(text(m) == "AAA");
  CHECK(minimizers(rec("s", "ABCD"), p).size() == 1);
  CHECK(ordered_minimizer_sequence(rec("s", "ABCD"), p).length() == 2);
  CHECK(minimizers(rec("s", "ABC"), p).empty());

  CHECK_THROWS_AS(minimizers(rec("s", "ABCD"), MinimizerParams{3, 3}), ValidationError);
  CHECK_THROWS_AS(minimizers(rec("s", "ABCD"), MinimizerParams{3, 0}), ValidationError);
}

TEST_CASE("minimizers match per-window enumeration") {
  Rng rng(10);
  for (int rep = 0; rep < 100; ++rep) {
    const int symbols = rep % 2 ? 2 : 5;
    const int k = 2 + static_cast<int>(uniform_below(rng, 10));
    const int mlen = 1 + static_cast<int>(uniform_below(rng, k - 1));
    const SequenceRecord s{"s", test::random_residues(rng, k + uniform_below(rng, 90), symbols), {}};
    const auto mins = minimizers(s, {k, mlen});
    REQUIRE(mins.size() == s.length() - k + 1);
    for (std::size_t w = 0; w < mins.size(); ++w)
      CHECK(mins[w] == test::window_minimizer(s.residues, w, k, mlen));
    CHECK(ordered_minimizer_sequence(s, {k, mlen}).length() ==
          (s.length() - k + 1) * mlen);
  }
}

TEST_CASE("information gain examples") {
  const auto data = toy_ig();
  CHECK(information_gain(data, 0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(information_gain(data, 1) == 0.0);
  CHECK(information_gain(data, 2) == doctest::Approx(0.0).epsilon(1e-15));

  auto unlabeled = data;
  unlabeled[2].label.reset();
  CHECK_THROWS_AS(information_gain(unlabeled, 0), ValidationError);
  auto ragged = data;
  ragged[1].residues.pop_back();
  CHECK_THROWS_AS(information_gain(ragged, 0), ValidationError);
  CHECK_THROWS_AS(information_gain(data, 3), ValidationError);
}

TEST_CASE("information gain bounds and permutation invariance") {
  Rng rng(21);
  for (int rep = 0; rep < 50; ++rep) {
    const int classes = 2 + static_cast<int>(uniform_below(rng, 4));
    auto data = random_labeled(rng, 8 + uniform_below(rng, 40), 12, 4, classes);
    const auto scores = information_gain_scores(data);
    std::set<std::string> labels;
    for (const auto& r : data) labels.insert(*r.label);
    for (const auto& s : scores) {
      std::set<Residue> symbols;
      for (const auto& r : data) symbols.insert(r.residues[s.position]);
      const double bound = std::min(std::log2(labels.size()), std::log2(symbols.size()));
      CHECK(s.ig >= 0.0);
      CHECK(s.ig <= bound + 1e-12);
    }
    auto shuffled = data;
    for (std::size_t i = shuffled.size() - 1; i > 0; --i)
      std::swap(shuffled[i], shuffled[uniform_below(rng, i + 1)]);
    const auto again = information_gain_scores(shuffled);
    for (std::size_t p = 0; p < scores.size(); ++p) CHECK(again[p].ig == scores[p].ig);
    CHECK(select_top_positions(data, 5).positions ==
          select_top_positions(shuffled, 5).positions);
  }
}

TEST_CASE("top-position selection") {
  const auto data = toy_ig();
  const auto one = select_top_positions(data, 1);
  CHECK(one.positions == std::vector<std::size_t>{0});
  CHECK(one.dataset[2].residues == letters().encode("B"));

  const auto all = select_top_positions(data, 3);
  for (std::size_t i = 0; i < data.size(); ++i)
    CHECK(all.dataset[i].residues == data[i].residues);

  // Positions 1 and 2 tie at zero gain; the lower index wins.
  const auto two = select_top_positions(data, 2);
  CHECK(two.positions == std::vector<std::size_t>{0, 1});

  // Reduced records keep the original left-to-right order.
  const std::vector<SequenceRecord> order{rec("a", "AAB", "c1"), rec("b", "BAB", "c1"),
                                          rec("c", "ABA", "c2"), rec("d", "BBA", "c2")};
  const auto sel = select_top_positions(order, 2);
  CHECK(sel.positions == std::vector<std::size_t>{1, 2});
  CHECK(sel.dataset[0].residues == letters().encode("AB"));

  CHECK_THROWS_AS(select_top_positions(data, 4), ValidationError);
}

TEST_CASE("pipelines") {
  Rng rng(1274);
  const auto protein = random_labeled(rng, 6, 1274, 20, 3);
  PipelineParams params;

  const auto plain = pipeline(protein, PipelineVariant::plain, params);
  for (std::size_t i = 0; i < protein.size(); ++i)
    CHECK(plain.dataset[i].residues == protein[i].residues);

  const auto omk = pipeline(protein, PipelineVariant::omk, params);
  for (const auto& r : omk.dataset) CHECK(r.length() == 3798);

  const auto igk = pipeline(protein, PipelineVariant::igk, params);
  for (const auto& r : igk.dataset) CHECK(r.length() == 243);
  CHECK(igk.positions.size() == 243);
  CHECK(std::is_sorted(igk.positions.begin(), igk.positions.end()));

  const auto both = pipeline(protein, PipelineVariant::omk_ig, params);
  for (const auto& r : both.dataset) CHECK(r.length() == 2184);

  auto unlabeled = protein;
  unlabeled[0].label.reset();
  CHECK_THROWS_AS(pipeline(unlabeled, PipelineVariant::igk, params), ValidationError);
  CHECK_NOTHROW(pipeline(unlabeled, PipelineVariant::omk, params));

  auto ragged = protein;
  ragged[1].residues.resize(1000);
  CHECK_THROWS_AS(pipeline(ragged, PipelineVariant::omk_ig, params), ValidationError);

  // Deterministic
  const auto again = pipeline(protein, PipelineVariant::omk_ig, params);
  for (std::size_t i = 0; i < protein.size(); ++i)
    CHECK(again.dataset[i].residues == both.dataset[i].residues);

  CHECK(parse_variant("OMK+IG") == PipelineVariant::omk_ig);
  CHECK_THROWS_AS(parse_variant("nope"), ValidationError);
}
