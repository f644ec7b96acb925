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

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mmk {

using Residue = std::uint8_t;

/// Ordered set of distinct symbols. Each symbol maps to its index.
/// Lookups are case-insensitive unless the alphabet itself contains both
/// cases of a letter.
class Alphabet {
 public:
  static Alphabet dna();
  static Alphabet protein();
  /// Explicit symbol list, e.g. "ABCDX". Throws ValidationError on
  /// duplicates or fewer than two symbols.
  static Alphabet from_symbols(std::string_view symbols);
  /// "dna", "protein" (any case) or an explicit symbol list.
  static Alphabet parse(std::string_view spec);

  int size() const { return static_cast<int>(symbols_.size()); }
  const std::string& symbols() const { return symbols_; }
  char symbol(Residue index) const { return symbols_[index]; }
  /// Index of `c`, or nullopt if the symbol is not in the alphabet.
  std::optional<Residue> index(char c) const;

  std::vector<Residue> encode(std::string_view text) const;
  std::string decode(std::span<const Residue> residues) const;

  bool operator==(const Alphabet& other) const {
    return symbols_ == other.symbols_;
  }

 private:
  explicit Alphabet(std::string symbols);

  std::string symbols_;
  std::array<std::int16_t, 256> lookup_{};
};

struct SequenceRecord {
  std::string id;
  std::vector<Residue> residues;
  std::optional<std::string> label;

  std::size_t length() const { return residues.size(); }
};

/// All length-k windows of a sequence, in position order, duplicates kept.
/// Stored flat: k-mer i occupies data[i*k, (i+1)*k).
class KmerSet {
 public:
  KmerSet() = default;
  KmerSet(int k, std::vector<Residue> data);

  int k() const { return k_; }
  std::size_t size() const { return k_ == 0 ? 0 : data_.size() / k_; }
  bool empty() const { return data_.empty(); }

  std::span<const Residue> operator[](std::size_t i) const {
    return {data_.data() + i * k_, static_cast<std::size_t>(k_)};
  }
  std::span<const Residue> flat() const { return data_; }

 private:
  int k_ = 0;
  std::vector<Residue> data_;
};

KmerSet extract_kmers(std::span<const Residue> residues, int k);
inline KmerSet extract_kmers(const SequenceRecord& seq, int k) {
  return extract_kmers(seq.residues, k);
}

/// Reads a FASTA file. Ids are the first whitespace-delimited token of each
/// header; wrapped sequence lines are joined.
std::vector<SequenceRecord> load_fasta(const std::filesystem::path& path,
                                       const Alphabet& alphabet);
std::vector<SequenceRecord> parse_fasta(std::string_view text,
                                        const Alphabet& alphabet);

void write_fasta(const std::filesystem::path& path,
                 std::span<const SequenceRecord> records,
                 const Alphabet& alphabet);

/// Reads an "id,label" CSV with a header row.
std::map<std::string, std::string> load_labels(
    const std::filesystem::path& path);
std::map<std::string, std::string> parse_labels(std::string_view text);

/// Attaches labels by id. Records without a label entry are left unlabeled.
void attach_labels(std::vector<SequenceRecord>& records,
                   const std::map<std::string, std::string>& labels);

}  // namespace mmk
