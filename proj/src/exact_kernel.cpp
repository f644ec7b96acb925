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

#include "mmk/exact_kernel.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

#include "mmk/error.hpp"

namespace mmk {

namespace {

int derive_radix(const KmerSet& sx, const KmerSet& sy) {
  int hi = 1;
  for (const Residue r : sx.flat()) hi = std::max(hi, int{r});
  for (const Residue r : sy.flat()) hi = std::max(hi, int{r});
  return hi + 1;
}

int bits_for(int radix) {
  return std::max(1, static_cast<int>(std::bit_width(
                         static_cast<unsigned>(radix - 1))));
}

/// Sum over equal-key runs of (run length in a) * (run length in b).
template <typename Seq, typename Less>
std::uint64_t merge_runs(const Seq& a, const Seq& b, Less less) {
  std::uint64_t total = 0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() && j < b.size()) {
    if (less(a[i], b[j])) {
      ++i;
    } else if (less(b[j], a[i])) {
      ++j;
    } else {
      std::size_t ie = i + 1;
      while (ie < a.size() && !less(a[i], a[ie])) ++ie;
      std::size_t je = j + 1;
      while (je < b.size() && !less(b[j], b[je])) ++je;
      total = checked_add(total, checked_mul(ie - i, je - j));
      i = ie;
      j = je;
    }
  }
  return total;
}

std::vector<std::uint64_t> packed_keys(const KmerSet& set,
                                       std::span<const int> theta, int bits) {
  std::vector<std::uint64_t> keys(set.size());
  const Residue* base = set.flat().data();
  const auto k = static_cast<std::size_t>(set.k());
  for (std::size_t n = 0; n < keys.size(); ++n) {
    const Residue* kmer = base + n * k;
    std::uint64_t key = 0;
    for (const int pos : theta) key = (key << bits) | kmer[pos];
    keys[n] = key;
  }
  return keys;
}

struct RestrictedLess {
  const KmerSet* set;
  std::span<const int> theta;

  bool operator()(std::size_t lhs, std::size_t rhs) const {
    const auto x = (*set)[lhs];
    const auto y = (*set)[rhs];
    for (const int pos : theta) {
      if (x[pos] != y[pos]) return x[pos] < y[pos];
    }
    return false;
  }
};

std::vector<std::size_t> comparison_order(const KmerSet& set,
                                          std::span<const int> theta) {
  std::vector<std::size_t> order(set.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), RestrictedLess{&set, theta});
  return order;
}

std::vector<std::size_t> counting_order(const KmerSet& set,
                                        std::span<const int> theta,
                                        int radix) {
  std::vector<std::size_t> order(set.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<std::size_t> scratch(order.size());
  std::vector<std::size_t> counts(static_cast<std::size_t>(radix) + 1);
  // Least significant position first; each pass is stable.
  for (auto it = theta.rbegin(); it != theta.rend(); ++it) {
    const int pos = *it;
    std::fill(counts.begin(), counts.end(), 0);
    for (const std::size_t idx : order) ++counts[set[idx][pos] + 1];
    std::partial_sum(counts.begin(), counts.end(), counts.begin());
    for (const std::size_t idx : order) scratch[counts[set[idx][pos]]++] = idx;
    order.swap(scratch);
  }
  return order;
}

std::uint64_t merge_orders(const KmerSet& sx, const std::vector<std::size_t>& ox,
                           const KmerSet& sy, const std::vector<std::size_t>& oy,
                           std::span<const int> theta) {
  // merge_runs compares a[i] with a[j], a[i] with b[j] and b[j] with a[i];
  // the pair of index vectors is wrapped so every comparison resolves the
  // right set.
  struct Tagged {
    std::size_t idx;
    bool from_y;
  };
  std::vector<Tagged> tx(ox.size());
  std::vector<Tagged> ty(oy.size());
  for (std::size_t i = 0; i < ox.size(); ++i) tx[i] = {ox[i], false};
  for (std::size_t i = 0; i < oy.size(); ++i) ty[i] = {oy[i], true};
  auto less = [&](const Tagged& l, const Tagged& r) {
    const auto a = l.from_y ? sy[l.idx] : sx[l.idx];
    const auto b = r.from_y ? sy[r.idx] : sx[r.idx];
    for (const int pos : theta) {
      if (a[pos] != b[pos]) return a[pos] < b[pos];
    }
    return false;
  };
  return merge_runs(tx, ty, less);
}

void check_compatible(const KmerSet& sx, const KmerSet& sy) {
  if (sx.k() != sy.k() || sx.k() < 1) {
    throw ValidationError("k-mer sets have mismatched k (" +
                          std::to_string(sx.k()) + " vs " +
                          std::to_string(sy.k()) + ")");
  }
}

}  // namespace

IndexSubset::IndexSubset(std::vector<int> positions, int k)
    : positions_(std::move(positions)) {
  for (std::size_t i = 0; i < positions_.size(); ++i) {
    if (positions_[i] < 0 || positions_[i] >= k ||
        (i > 0 && positions_[i] <= positions_[i - 1])) {
      throw ValidationError("index subset must be strictly increasing in [0," +
                            std::to_string(k) + ")");
    }
  }
}

std::string IndexSubset::to_string() const {
  std::string out = "{";
  for (std::size_t i = 0; i < positions_.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(positions_[i] + 1);
  }
  return out + "}";
}

std::uint64_t f_theta(const KmerSet& sx, const KmerSet& sy,
                      const IndexSubset& theta, SortBackend backend,
                      int radix) {
  check_compatible(sx, sy);
  const auto pos = theta.positions();
  if (!pos.empty() && pos.back() >= sx.k()) {
    throw ValidationError("index subset position outside k-mer");
  }
  if (sx.empty() || sy.empty()) return 0;
  if (pos.empty()) return checked_mul(sx.size(), sy.size());
  if (radix == 0) radix = derive_radix(sx, sy);

  if (backend == SortBackend::counting) {
    return merge_orders(sx, counting_order(sx, pos, radix), sy,
                        counting_order(sy, pos, radix), pos);
  }

  const int bits = bits_for(radix);
  if (bits * static_cast<int>(pos.size()) <= 64) {
    auto kx = packed_keys(sx, pos, bits);
    auto ky = packed_keys(sy, pos, bits);
    std::sort(kx.begin(), kx.end());
    std::sort(ky.begin(), ky.end());
    return merge_runs(kx, ky, std::less<>{});
  }
  return merge_orders(sx, comparison_order(sx, pos), sy,
                      comparison_order(sy, pos), pos);
}

std::vector<std::uint64_t> mismatch_counts_from_subset_counts(
    std::span<const std::uint64_t> F, int k) {
  std::vector<std::uint64_t> M(F.size());
  for (std::size_t i = 0; i < F.size(); ++i) {
    std::uint64_t covered = 0;
    for (std::size_t j = 0; j < i; ++j) {
      covered = checked_add(
          covered, checked_mul(binomial(k - static_cast<int>(j),
                                        k - static_cast<int>(i)),
                               M[j]));
    }
    if (covered > F[i]) {
      throw NumericError("inconsistent subset counts: F[" + std::to_string(i) +
                         "] = " + std::to_string(F[i]) + " < " +
                         std::to_string(covered));
    }
    M[i] = F[i] - covered;
  }
  return M;
}

MismatchProfile exact_profile(const KmerSet& sx, const KmerSet& sy, int m,
                              SortBackend backend) {
  check_compatible(sx, sy);
  if (m < 0) throw ValidationError("m must be >= 0");
  const int k = sx.k();
  MismatchProfile profile;
  profile.k = k;
  profile.t = std::min(2 * m, k);
  profile.F.assign(profile.t + 1, 0);
  if (sx.empty() || sy.empty()) {
    profile.M.assign(profile.t + 1, 0);
    return profile;
  }
  const int radix = derive_radix(sx, sy);
  for (int i = 0; i <= profile.t; ++i) {
    std::uint64_t sum = 0;
    for (auto& positions : all_combinations(k, k - i)) {
      sum = checked_add(sum, f_theta(sx, sy, IndexSubset(std::move(positions), k),
                                     backend, radix));
    }
    profile.F[i] = sum;
  }
  profile.M = mismatch_counts_from_subset_counts(profile.F, k);
  return profile;
}

void check_table(const IntersectionTable& table, const KmerSet& sx,
                 const KmerSet& sy) {
  if (table.k != sx.k() || table.k != sy.k()) {
    throw ValidationError("intersection table built for k=" +
                          std::to_string(table.k) + ", k-mers have k=" +
                          std::to_string(sx.k()));
  }
  for (const auto* set : {&sx, &sy}) {
    for (const Residue r : set->flat()) {
      if (r >= table.s) {
        throw ValidationError("residue index " + std::to_string(r) +
                              " outside table alphabet size " +
                              std::to_string(table.s));
      }
    }
  }
}

BigInt exact_kernel(const KmerSet& sx, const KmerSet& sy,
                    const IntersectionTable& table, SortBackend backend) {
  check_table(table, sx, sy);
  const auto profile = exact_profile(sx, sy, table.m, backend);
  BigInt k_value = 0;
  for (int i = 0; i <= profile.t; ++i) k_value += table[i] * profile.M[i];
  return k_value;
}

BigInt exact_kernel(const SequenceRecord& x, const SequenceRecord& y, int k,
                    int m, const IntersectionTable& table,
                    SortBackend backend) {
  if (table.m != m) {
    throw ValidationError("intersection table built for m=" +
                          std::to_string(table.m) + ", requested m=" +
                          std::to_string(m));
  }
  return exact_kernel(extract_kmers(x, k), extract_kmers(y, k), table,
                      backend);
}

double exact_kernel_value(const SequenceRecord& x, const SequenceRecord& y,
                          int k, int m, const IntersectionTable& table,
                          SortBackend backend) {
  return to_double(exact_kernel(x, y, k, m, table, backend));
}

std::vector<std::uint64_t> brute_force_profile(const KmerSet& sx,
                                               const KmerSet& sy) {
  check_compatible(sx, sy);
  std::vector<std::uint64_t> hist(sx.k() + 1, 0);
  for (std::size_t i = 0; i < sx.size(); ++i)
    for (std::size_t j = 0; j < sy.size(); ++j)
      ++hist[hamming_distance(sx[i], sy[j])];
  return hist;
}

BigInt brute_force_kernel(const SequenceRecord& x, const SequenceRecord& y,
                          int k, int m, int s) {
  const auto sx = extract_kmers(x, k);
  const auto sy = extract_kmers(y, k);
  BigInt total = 0;
  for (std::size_t i = 0; i < sx.size(); ++i)
    for (std::size_t j = 0; j < sy.size(); ++j)
      total += brute_force_intersection(sx[i], sy[j], m, s);
  return total;
}

}  // namespace mmk
