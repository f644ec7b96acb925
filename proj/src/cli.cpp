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

#include "mmk/cli.hpp"

#include <chrono>
#include <fstream>
#include <map>
#include <optional>

#include "CLI11.hpp"
#include "json.hpp"
#include "mmk/error.hpp"
#include "mmk/gram.hpp"
#include "mmk/linalg.hpp"
#include "mmk/preprocess.hpp"
#include "mmk/selftest.hpp"
#include "mmk/seq_model.hpp"

namespace mmk {

namespace {

struct KernelArgs {
  std::string input;
  std::string output;
  std::string alphabet = "protein";
  int k = 3;
  int m = 0;
  std::string method = "exact";
  std::string mode = "fixed";
  double epsilon = 0.5;
  double delta = 0.25;
  int cap = 300;
  std::uint64_t seed = 0;
  int threads = 1;
  std::string sort = "comparison";
};

struct PreprocessArgs {
  std::string input;
  std::string output;
  std::string alphabet = "protein";
  std::string variant = "plain";
  int k = 9;
  int mlen = 3;
  std::optional<std::size_t> top;
  std::string labels;
};

struct PcaArgs {
  std::string input;
  std::string output;
  std::optional<int> components;
};

void write_json(const std::filesystem::path& path,
                const nlohmann::ordered_json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

void require_file(const std::string& path) {
  if (!std::filesystem::is_regular_file(path)) {
    throw IoError("input file not found: " + path);
  }
}

int cmd_kernel(const KernelArgs& a, std::ostream& log) {
  require_file(a.input);
  const auto alphabet = Alphabet::parse(a.alphabet);
  const auto records = load_fasta(a.input, alphabet);

  GramOptions opts;
  opts.k = a.k;
  opts.m = a.m;
  opts.method = a.method == "approx" ? KernelMethod::approx : KernelMethod::exact;
  opts.sampling.epsilon = a.epsilon;
  opts.sampling.delta = a.delta;
  opts.sampling.cap = a.cap;
  opts.sampling.seed = a.seed;
  opts.sampling.mode =
      a.mode == "adaptive" ? SamplingMode::adaptive : SamplingMode::fixed;
  opts.threads = a.threads;
  opts.backend =
      a.sort == "counting" ? SortBackend::counting : SortBackend::comparison;

  const auto start = std::chrono::steady_clock::now();
  const auto gram = compute_gram(records, alphabet, opts);
  const double secs = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - start)
                          .count();

  write_gram(a.output, gram);
  auto side = to_json(gram.meta);
  side["command"] = "kernel";
  side["input"] = a.input;
  side["sort"] = a.sort;
  write_json(sidecar_path(a.output), side);

  log << "kernel: " << gram.size() << " sequences, method "
      << to_string(opts.method) << ", k=" << opts.k << " m=" << opts.m
      << ", " << secs << " s\n";
  return kExitOk;
}

int cmd_preprocess(const PreprocessArgs& a, std::ostream& log) {
  require_file(a.input);
  const auto variant = parse_variant(a.variant);
  const bool uses_ig =
      variant == PipelineVariant::igk || variant == PipelineVariant::omk_ig;
  if (uses_ig && a.labels.empty()) {
    throw ValidationError("variant " + to_string(variant) +
                          " requires --labels");
  }
  const auto alphabet = Alphabet::parse(a.alphabet);
  auto records = load_fasta(a.input, alphabet);
  if (!a.labels.empty()) {
    require_file(a.labels);
    attach_labels(records, load_labels(a.labels));
  }

  PipelineParams params;
  params.minimizer = {a.k, a.mlen};
  params.top_t = a.top;
  const auto result = pipeline(records, variant, params);
  write_fasta(a.output, result.dataset, alphabet);

  nlohmann::ordered_json side;
  side["command"] = "preprocess";
  side["input"] = a.input;
  side["labels"] = a.labels.empty() ? nlohmann::ordered_json(nullptr)
                                    : nlohmann::ordered_json(a.labels);
  side["alphabet"] = alphabet.symbols();
  side["variant"] = to_string(variant);
  side["minimizer"] = {{"k", a.k}, {"m_len", a.mlen}};
  if (uses_ig) {
    side["top_t"] = a.top.value_or(default_top(variant));
    side["selected_positions"] = result.positions;
    auto scores = nlohmann::ordered_json::array();
    for (const auto& s : result.scores) scores.push_back(s.ig);
    side["ig_scores"] = scores;
  }
  side["kernel_defaults"] = {{"k", 3}, {"m", 0}};
  write_json(sidecar_path(a.output), side);

  log << "preprocess: " << result.dataset.size() << " records, variant "
      << to_string(variant);
  if (!result.dataset.empty()) {
    log << ", output length " << result.dataset.front().length();
  }
  log << '\n';
  return kExitOk;
}

int cmd_pca(const PcaArgs& a, std::ostream& log) {
  require_file(a.input);
  const auto gram = read_gram(a.input);
  const auto n = gram.size();
  int c = 0;
  if (a.components) {
    c = *a.components;
    if (c < 1 || c > n) {
      throw ValidationError("--components " + std::to_string(c) +
                            " outside [1, " + std::to_string(n) + "]");
    }
  } else {
    c = default_components(n);
    if (c < 50) {
      log << "warning: default of 50 components clamped to " << c << " for N="
          << n << '\n';
    }
  }
  const auto embedding = kernel_pca(gram, c);
  write_embedding(a.output, embedding);

  const auto centered = linalg::center(gram.values);
  const double err =
      linalg::relative_reconstruction_error(embedding.vectors, centered);
  log << "pca: " << c << " components of " << n
      << ", relative reconstruction error of centered Gram " << err << '\n';

  nlohmann::ordered_json side;
  side["command"] = "pca";
  side["input"] = a.input;
  side["components"] = c;
  side["centered"] = true;
  write_json(sidecar_path(a.output), side);
  return kExitOk;
}

int cmd_selftest(bool corrupt, std::ostream& log) {
  const auto start = std::chrono::steady_clock::now();
  SelftestOptions opts;
  opts.corrupt_table = corrupt;
  const auto results = run_selftest(opts);
  bool ok = true;
  for (const auto& r : results) {
    log << (r.passed ? "PASS  " : "FAIL  ") << r.name << "  [" << r.detail
        << "]\n";
    ok = ok && r.passed;
  }
  log << "selftest: "
      << std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
             .count()
      << " s\n";
  return ok ? kExitOk : kExitSelftestFailed;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& log) {
  CLI::App app{"Exact and sampled k,m-mismatch string kernels"};
  app.require_subcommand(1);

  KernelArgs ka;
  auto* kernel = app.add_subcommand("kernel", "Compute a Gram matrix");
  kernel->add_option("--in", ka.input, "Input FASTA")->required();
  kernel->add_option("--out", ka.output, "Output Gram matrix (sidecar: <out>.json)")
      ->required();
  kernel->add_option("--alphabet", ka.alphabet, "dna, protein or explicit symbols")
      ->capture_default_str();
  kernel->add_option("--k", ka.k, "k-mer length")->capture_default_str()
      ->check(CLI::Range(1, 62));
  kernel->add_option("--m", ka.m, "Mismatches allowed")->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  kernel->add_option("--method", ka.method, "exact or approx")
      ->capture_default_str()->check(CLI::IsMember({"exact", "approx"}));
  kernel->add_option("--mode", ka.mode, "Sampling mode: fixed or adaptive")
      ->capture_default_str()->check(CLI::IsMember({"fixed", "adaptive"}));
  kernel->add_option("--epsilon", ka.epsilon, "Accuracy, in (0,1)")
      ->capture_default_str();
  kernel->add_option("--delta", ka.delta, "Failure probability, in (0,1)")
      ->capture_default_str();
  kernel->add_option("--cap-b", ka.cap, "Max index subsets per distance level")
      ->capture_default_str();
  kernel->add_option("--seed", ka.seed, "Sampling seed")->capture_default_str();
  kernel->add_option("--threads", ka.threads, "Pair-level worker threads")
      ->capture_default_str()->check(CLI::PositiveNumber);
  kernel->add_option("--sort", ka.sort, "Sort backend: comparison or counting")
      ->capture_default_str()->check(CLI::IsMember({"comparison", "counting"}));

  PreprocessArgs pa;
  auto* pre = app.add_subcommand("preprocess", "Minimizer / information-gain preprocessing");
  pre->add_option("--in", pa.input, "Input FASTA")->required();
  pre->add_option("--out", pa.output, "Output FASTA (sidecar: <out>.json)")->required();
  pre->add_option("--alphabet", pa.alphabet, "dna, protein or explicit symbols")
      ->capture_default_str();
  pre->add_option("--variant", pa.variant, "plain, omk, igk or omk_ig")
      ->capture_default_str();
  pre->add_option("--k", pa.k, "Minimizer window length")->capture_default_str();
  pre->add_option("--mlen", pa.mlen, "Minimizer length")->capture_default_str();
  pre->add_option("--top", pa.top, "Positions kept by IG (default 243 igk, 2184 omk_ig)");
  pre->add_option("--labels", pa.labels, "Label CSV (id,label)");

  PcaArgs ca;
  auto* pca = app.add_subcommand("pca", "Kernel PCA embedding of a Gram matrix");
  pca->add_option("--in", ca.input, "Gram matrix file")->required();
  pca->add_option("--out", ca.output, "Embedding CSV")->required();
  pca->add_option("--components", ca.components,
                  "Principal components (default 50, clamped to N-1)");

  bool corrupt = false;
  auto* self = app.add_subcommand("selftest", "Run brute-force equivalence checks");
  self->add_flag("--corrupt-table", corrupt, "Test hook: perturb I_0")
      ->group("");

  std::vector<std::string> reversed(args.rbegin(), args.rend() - 1);
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    log << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    log << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    log << "error: " << e.what() << '\n';
    return kExitValidation;
  }

  try {
    if (*kernel) return cmd_kernel(ka, log);
    if (*pre) return cmd_preprocess(pa, log);
    if (*pca) return cmd_pca(ca, log);
    if (*self) return cmd_selftest(corrupt, log);
  } catch (const IoError& e) {
    log << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const ValidationError& e) {
    log << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const NumericError& e) {
    log << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
  return kExitValidation;
}

}  // namespace mmk
