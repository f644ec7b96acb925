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

#include "mmk/gram.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "mmk/error.hpp"
#include "mmk/intersect.hpp"
#include "mmk/linalg.hpp"

namespace mmk {

namespace {

/// Runs fn(pair) for every unordered pair (i <= j) on `threads` workers.
/// Each pair writes its own cells, so the result is schedule-independent.
template <typename Fn>
void for_each_pair(Eigen::Index n, int threads, Fn&& fn) {
  std::vector<std::pair<Eigen::Index, Eigen::Index>> pairs;
  pairs.reserve(static_cast<std::size_t>(n * (n + 1) / 2));
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j) pairs.emplace_back(i, j);

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t idx = next.fetch_add(1);
      if (idx >= pairs.size()) return;
      try {
        fn(pairs[idx].first, pairs[idx].second);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = pairs.size();
        return;
      }
    }
  };

  const int count = std::max(1, threads);
  if (count == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < count; ++w) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void check_id(const std::string& id) {
  if (id.empty() || id.find_first_of(", \t\r\n") != std::string::npos) {
    throw ValidationError("id '" + id +
                          "' cannot be written: empty or contains a comma or "
                          "whitespace");
  }
}

}  // namespace

std::string to_string(KernelMethod method) {
  return method == KernelMethod::exact ? "exact" : "approx";
}

std::string to_string(SamplingMode mode) {
  return mode == SamplingMode::fixed ? "fixed" : "adaptive";
}

nlohmann::ordered_json to_json(const GramMeta& meta) {
  nlohmann::ordered_json j;
  j["method"] = to_string(meta.method);
  j["k"] = meta.k;
  j["m"] = meta.m;
  j["alphabet"] = meta.alphabet;
  if (meta.method == KernelMethod::approx) {
    j["mode"] = to_string(meta.sampling.mode);
    j["seed"] = meta.sampling.seed;
    j["epsilon"] = meta.sampling.epsilon;
    j["delta"] = meta.sampling.delta;
    j["B"] = meta.sampling.cap;
    j["plan_digest"] = meta.plan_digest;
  }
  return j;
}

GramMatrix compute_gram(std::span<const SequenceRecord> dataset,
                        const Alphabet& alphabet, const GramOptions& options) {
  if (dataset.empty()) throw ValidationError("empty dataset");
  if (options.k < 1) throw ValidationError("k must be >= 1");
  if (options.m < 0) throw ValidationError("m must be >= 0");
  if (options.method == KernelMethod::approx) options.sampling.validate();

  const auto n = static_cast<Eigen::Index>(dataset.size());
  GramMatrix gram;
  gram.values = Eigen::MatrixXd::Zero(n, n);
  gram.meta.method = options.method;
  gram.meta.k = options.k;
  gram.meta.m = options.m;
  gram.meta.alphabet = alphabet.symbols();
  gram.meta.sampling = options.sampling;

  std::vector<KmerSet> kmers;
  kmers.reserve(dataset.size());
  for (const auto& rec : dataset) {
    for (std::size_t p = 0; p < rec.residues.size(); ++p) {
      if (rec.residues[p] >= alphabet.size()) {
        throw ValidationError("sequence '" + rec.id +
                              "' has a residue outside the alphabet at "
                              "position " +
                              std::to_string(p));
      }
    }
    gram.ids.push_back(rec.id);
    kmers.push_back(extract_kmers(rec, options.k));
  }

  const auto table =
      build_intersection_table(options.k, options.m, alphabet.size());
  auto store = [&](Eigen::Index i, Eigen::Index j, double v) {
    gram.values(i, j) = v;
    gram.values(j, i) = v;
  };

  if (options.method == KernelMethod::exact) {
    for_each_pair(n, options.threads, [&](Eigen::Index i, Eigen::Index j) {
      store(i, j, to_double(exact_kernel(kmers[i], kmers[j], table,
                                         options.backend)));
    });
  } else if (options.sampling.mode == SamplingMode::fixed) {
    const auto plan = build_theta_plan(options.k, options.m, options.sampling);
    gram.meta.plan_digest = plan.digest();
    for_each_pair(n, options.threads, [&](Eigen::Index i, Eigen::Index j) {
      store(i, j,
            approx_kernel(kmers[i], kmers[j], table, plan, options.backend));
    });
  } else {
    for_each_pair(n, options.threads, [&](Eigen::Index i, Eigen::Index j) {
      Rng rng(pair_seed(options.sampling.seed, gram.ids[i], gram.ids[j]));
      store(i, j, adaptive_kernel(kmers[i], kmers[j], table, options.sampling,
                                  rng, options.backend)
                      .value);
    });
  }
  return gram;
}

double min_eigenvalue(const GramMatrix& gram) {
  return linalg::min_eigenvalue(gram.values);
}

GramMatrix center_gram(const GramMatrix& gram) {
  GramMatrix out = gram;
  out.values = linalg::center(gram.values);
  return out;
}

int default_components(Eigen::Index n) {
  return static_cast<int>(std::max<Eigen::Index>(
      1, std::min<Eigen::Index>(50, n - 1)));
}

Embedding kernel_pca(const GramMatrix& gram, int components) {
  const Eigen::Index n = gram.size();
  if (components < 1 || components > n) {
    throw ValidationError("component count " + std::to_string(components) +
                          " outside [1, " + std::to_string(n) + "]");
  }
  const auto centered = linalg::center(gram.values);
  const auto pairs = linalg::sorted_eigenpairs(centered);
  const double scale = pairs.values.cwiseAbs().maxCoeff();

  Embedding out;
  out.ids = gram.ids;
  out.eigenvalues.resize(components);
  out.vectors.resize(n, components);
  for (int c = 0; c < components; ++c) {
    double lambda = pairs.values(c);
    if (lambda < 0) {
      if (lambda < -kPsdTolerance * scale) {
        throw NumericError("centered Gram matrix is not positive "
                           "semidefinite: eigenvalue " +
                           format_double(lambda) + " (largest |eigenvalue| " +
                           format_double(scale) + ")");
      }
      lambda = 0;
    }
    out.eigenvalues(c) = lambda;
    out.vectors.col(c) = pairs.vectors.col(c) * std::sqrt(lambda);
  }
  return out;
}

std::filesystem::path sidecar_path(const std::filesystem::path& path) {
  return std::filesystem::path(path.string() + ".json");
}

void write_gram(const std::filesystem::path& path, const GramMatrix& gram) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  const auto n = gram.size();
  out << "N " << n << '\n';
  for (Eigen::Index i = 0; i < n; ++i) {
    check_id(gram.ids[i]);
    out << (i ? "," : "") << gram.ids[i];
  }
  out << '\n';
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      out << (j ? " " : "") << format_double(gram.values(i, j));
    }
    out << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());

  std::ofstream side(sidecar_path(path), std::ios::binary);
  if (!side) throw IoError("cannot write " + sidecar_path(path).string());
  side << to_json(gram.meta).dump(2) << '\n';
}

namespace {

GramMeta meta_from_json(const nlohmann::json& j) {
  GramMeta meta;
  meta.method = j.at("method") == "approx" ? KernelMethod::approx
                                           : KernelMethod::exact;
  meta.k = j.at("k");
  meta.m = j.at("m");
  meta.alphabet = j.value("alphabet", "");
  if (meta.method == KernelMethod::approx) {
    meta.sampling.mode = j.value("mode", "fixed") == "adaptive"
                             ? SamplingMode::adaptive
                             : SamplingMode::fixed;
    meta.sampling.seed = j.value("seed", std::uint64_t{0});
    meta.sampling.epsilon = j.value("epsilon", 0.5);
    meta.sampling.delta = j.value("delta", 0.25);
    meta.sampling.cap = j.value("B", 300);
    meta.plan_digest = j.value("plan_digest", "");
  }
  return meta;
}

}  // namespace

GramMatrix read_gram(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  std::string tag;
  long long n = -1;
  if (!std::getline(in, line) || !(std::istringstream(line) >> tag >> n) ||
      tag != "N" || n < 1) {
    throw ValidationError(path.string() + ": expected \"N <count>\" header");
  }
  GramMatrix gram;
  if (!std::getline(in, line)) {
    throw ValidationError(path.string() + ": missing id line");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::istringstream ids(line);
  for (std::string id; std::getline(ids, id, ',');) gram.ids.push_back(id);
  if (static_cast<long long>(gram.ids.size()) != n) {
    throw ValidationError(path.string() + ": expected " + std::to_string(n) +
                          " ids, found " + std::to_string(gram.ids.size()));
  }
  gram.values.resize(n, n);
  for (long long i = 0; i < n; ++i) {
    if (!std::getline(in, line)) {
      throw ValidationError(path.string() + ": missing matrix row " +
                            std::to_string(i + 1));
    }
    std::istringstream row(line);
    for (long long j = 0; j < n; ++j) {
      std::string cell;
      if (!(row >> cell)) {
        throw ValidationError(path.string() + ": row " + std::to_string(i + 1) +
                              " has fewer than " + std::to_string(n) +
                              " values");
      }
      try {
        gram.values(i, j) = std::stod(cell);
      } catch (const std::exception&) {
        throw ValidationError(path.string() + ": bad number '" + cell + "'");
      }
    }
  }
  if (gram.values != gram.values.transpose()) {
    throw ValidationError(path.string() + ": matrix is not symmetric");
  }

  const auto side = sidecar_path(path);
  if (std::filesystem::exists(side)) {
    std::ifstream sin(side);
    try {
      gram.meta = meta_from_json(nlohmann::json::parse(sin));
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError(side.string() + ": " + e.what());
    }
  }
  return gram;
}

void write_embedding(const std::filesystem::path& path,
                     const Embedding& embedding) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << "# eigenvalues:";
  for (int c = 0; c < embedding.components(); ++c) {
    out << (c ? "," : " ") << format_double(embedding.eigenvalues(c));
  }
  out << "\nid";
  for (int c = 0; c < embedding.components(); ++c) out << ",e" << c + 1;
  out << '\n';
  for (std::size_t i = 0; i < embedding.ids.size(); ++i) {
    out << embedding.ids[i];
    for (int c = 0; c < embedding.components(); ++c) {
      out << ',' << format_double(embedding.vectors(static_cast<Eigen::Index>(i), c));
    }
    out << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace mmk
