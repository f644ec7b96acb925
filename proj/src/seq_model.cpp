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

#include "mmk/seq_model.hpp"

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "mmk/error.hpp"

namespace mmk {

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("read failed: " + path.string());
  return buf.str();
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    fn(line, ++line_no);
    if (nl == std::string_view::npos) break;
    text.remove_prefix(nl + 1);
  }
}

}  // namespace

Alphabet::Alphabet(std::string symbols) : symbols_(std::move(symbols)) {
  if (symbols_.size() < 2) {
    throw ValidationError("alphabet needs at least 2 symbols, got " +
                          std::to_string(symbols_.size()));
  }
  if (symbols_.size() > 256) {
    throw ValidationError("alphabet larger than 256 symbols");
  }
  lookup_.fill(-1);
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    auto& slot = lookup_[static_cast<unsigned char>(symbols_[i])];
    if (slot >= 0) {
      throw ValidationError(std::string("duplicate alphabet symbol '") +
                            symbols_[i] + "'");
    }
    slot = static_cast<std::int16_t>(i);
  }
  // Fold the other case onto each letter unless that case is a symbol too.
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    const auto c = static_cast<unsigned char>(symbols_[i]);
    for (const int other : {std::tolower(c), std::toupper(c)}) {
      auto& slot = lookup_[static_cast<unsigned char>(other)];
      if (slot < 0) slot = static_cast<std::int16_t>(i);
    }
  }
}

Alphabet Alphabet::dna() { return Alphabet("ACGT"); }

Alphabet Alphabet::protein() { return Alphabet("ACDEFGHIKLMNPQRSTVWY"); }

Alphabet Alphabet::from_symbols(std::string_view symbols) {
  return Alphabet(std::string(symbols));
}

Alphabet Alphabet::parse(std::string_view spec) {
  std::string lower;
  for (const char c : spec)
    lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (lower == "dna") return dna();
  if (lower == "protein") return protein();
  return from_symbols(spec);
}

std::optional<Residue> Alphabet::index(char c) const {
  const auto slot = lookup_[static_cast<unsigned char>(c)];
  if (slot < 0) return std::nullopt;
  return static_cast<Residue>(slot);
}

std::vector<Residue> Alphabet::encode(std::string_view text) const {
  std::vector<Residue> out;
  out.reserve(text.size());
  for (std::size_t pos = 0; pos < text.size(); ++pos) {
    const auto idx = index(text[pos]);
    if (!idx) {
      throw ValidationError(std::string("unknown symbol '") + text[pos] +
                            "' at position " + std::to_string(pos));
    }
    out.push_back(*idx);
  }
  return out;
}

std::string Alphabet::decode(std::span<const Residue> residues) const {
  std::string out;
  out.reserve(residues.size());
  for (const Residue r : residues) {
    if (r >= symbols_.size()) {
      throw ValidationError("residue index " + std::to_string(r) +
                            " outside alphabet of size " +
                            std::to_string(symbols_.size()));
    }
    out.push_back(symbols_[r]);
  }
  return out;
}

KmerSet::KmerSet(int k, std::vector<Residue> data)
    : k_(k), data_(std::move(data)) {
  if (k < 1) throw ValidationError("k must be >= 1");
  if (data_.size() % static_cast<std::size_t>(k) != 0) {
    throw ValidationError("k-mer buffer length not a multiple of k");
  }
}

KmerSet extract_kmers(std::span<const Residue> residues, int k) {
  if (k < 1) throw ValidationError("k must be >= 1, got " + std::to_string(k));
  const std::size_t len = residues.size();
  const auto uk = static_cast<std::size_t>(k);
  std::vector<Residue> data;
  if (len >= uk) {
    const std::size_t n = len - uk + 1;
    data.reserve(n * uk);
    for (std::size_t i = 0; i < n; ++i) {
      data.insert(data.end(), residues.begin() + i, residues.begin() + i + k);
    }
  }
  return KmerSet(k, std::move(data));
}

std::vector<SequenceRecord> parse_fasta(std::string_view text,
                                        const Alphabet& alphabet) {
  std::vector<SequenceRecord> records;
  std::set<std::string> seen;
  bool any_content = false;

  for_each_line(text, [&](std::string_view line, std::size_t line_no) {
    if (trim(line).empty()) return;
    any_content = true;
    if (line.front() == '>') {
      std::string_view header = trim(line.substr(1));
      const auto ws = header.find_first_of(" \t");
      std::string id(header.substr(0, ws));
      if (id.empty()) {
        throw ValidationError("empty FASTA id on line " +
                              std::to_string(line_no));
      }
      if (!seen.insert(id).second) {
        throw ValidationError("duplicate sequence id '" + id + "'");
      }
      records.push_back(SequenceRecord{std::move(id), {}, std::nullopt});
      return;
    }
    if (records.empty()) {
      throw ValidationError("sequence data before first FASTA header (line " +
                            std::to_string(line_no) + ")");
    }
    auto& rec = records.back();
    for (const char c : trim(line)) {
      const auto idx = alphabet.index(c);
      if (!idx) {
        throw ValidationError("sequence '" + rec.id + "': unknown symbol '" +
                              std::string(1, c) + "' at position " +
                              std::to_string(rec.residues.size()));
      }
      rec.residues.push_back(*idx);
    }
  });

  if (!any_content) throw ValidationError("empty FASTA input");
  return records;
}

std::vector<SequenceRecord> load_fasta(const std::filesystem::path& path,
                                       const Alphabet& alphabet) {
  return parse_fasta(read_file(path), alphabet);
}

void write_fasta(const std::filesystem::path& path,
                 std::span<const SequenceRecord> records,
                 const Alphabet& alphabet) {
  constexpr std::size_t kWidth = 60;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  for (const auto& rec : records) {
    out << '>' << rec.id << '\n';
    const std::string text = alphabet.decode(rec.residues);
    for (std::size_t i = 0; i < text.size(); i += kWidth) {
      out << text.substr(i, kWidth) << '\n';
    }
  }
  if (!out) throw IoError("write failed: " + path.string());
}

std::map<std::string, std::string> parse_labels(std::string_view text) {
  std::map<std::string, std::string> labels;
  bool header_seen = false;
  for_each_line(text, [&](std::string_view line, std::size_t line_no) {
    if (trim(line).empty()) return;
    const auto comma = line.find(',');
    if (comma == std::string_view::npos) {
      throw ValidationError("label CSV line " + std::to_string(line_no) +
                            ": expected two columns \"id,label\"");
    }
    if (!header_seen) {
      header_seen = true;
      return;
    }
    std::string id(trim(line.substr(0, comma)));
    std::string label(trim(line.substr(comma + 1)));
    if (id.empty() || label.empty()) {
      throw ValidationError("label CSV line " + std::to_string(line_no) +
                            ": missing column");
    }
    if (!labels.emplace(id, std::move(label)).second) {
      throw ValidationError("duplicate id '" + id + "' in label CSV");
    }
  });
  return labels;
}

std::map<std::string, std::string> load_labels(
    const std::filesystem::path& path) {
  return parse_labels(read_file(path));
}

void attach_labels(std::vector<SequenceRecord>& records,
                   const std::map<std::string, std::string>& labels) {
  for (auto& rec : records) {
    if (const auto it = labels.find(rec.id); it != labels.end()) {
      rec.label = it->second;
    }
  }
}

}  // namespace mmk
