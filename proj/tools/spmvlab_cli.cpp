// Copyright 2026 The spmvlab authors
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

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "spmvlab/spmvlab.hpp"

namespace fs = std::filesystem;
using namespace spmvlab;

namespace {

std::vector<std::string> split_list(const std::string& list) {
  std::vector<std::string> items;
  std::size_t start = 0;
  while (start <= list.size()) {
    const auto comma = list.find(',', start);
    const auto item = list.substr(start, comma - start);
    if (!item.empty()) items.push_back(item);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return items;
}

std::vector<Algorithm> parse_algs(const std::string& list) {
  if (list.empty() || list == "all") {
    return {all_algorithms.begin(), all_algorithms.end()};
  }
  std::vector<Algorithm> algs;
  for (const auto& name : split_list(list)) algs.push_back(algorithm_from_name(name));
  return algs;
}

std::vector<unsigned> parse_threads(const std::string& list) {
  std::vector<unsigned> threads;
  for (const auto& item : split_list(list)) {
    threads.push_back(static_cast<unsigned>(std::stoul(item)));
  }
  return threads;
}

/// All matrix files under a path: the file itself, or the directory's
/// regular files in name order.
std::vector<fs::path> matrix_files(const fs::path& path) {
  if (!fs::is_directory(path)) return {path};
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(path)) {
    if (entry.is_regular_file()) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

struct CommonArgs {
  std::string matrix;
  std::string algs = "all";
  std::string threads;
  unsigned reps = BenchConfig{}.spmv_reps;
  unsigned convert_reps = BenchConfig{}.convert_reps;
  unsigned warmup = BenchConfig{}.warmup;
  std::uint64_t l2_bytes = default_l2_bytes;
  std::size_t split_threshold = 0;
  std::uint64_t seed = 1;
  std::string out;
  std::string format = "csv";
};

void add_common_options(CLI::App* cmd, CommonArgs& args, bool needs_matrix) {
  auto* matrix = cmd->add_option("--matrix", args.matrix,
                                 "matrix file (Matrix Market or cache), or a "
                                 "directory of them");
  if (needs_matrix) matrix->required();
  cmd->add_option("--algs", args.algs,
                  "comma-separated engines (default: all eleven)");
  cmd->add_option("--threads", args.threads,
                  "comma-separated thread counts (default: powers of two up to "
                  "the core count)");
  cmd->add_option("--reps", args.reps, "timed multiplications per engine");
  cmd->add_option("--convert-reps", args.convert_reps,
                  "timed conversions per format");
  cmd->add_option("--warmup", args.warmup, "untimed warmup runs");
  cmd->add_option("--l2-bytes", args.l2_bytes,
                  "L2 budget used by the block-size rule");
  cmd->add_option("--split-threshold", args.split_threshold,
                  "CSB task-split threshold (0: twice the block side)");
  cmd->add_option("--seed", args.seed, "seed for inputs and generators");
  cmd->add_option("--out", args.out, "report path (default: stdout)");
  cmd->add_option("--format", args.format, "report format: csv or md")
      ->check(CLI::IsMember({"csv", "md"}));
}

BenchConfig to_config(const CommonArgs& args) {
  BenchConfig config;
  config.algorithms = parse_algs(args.algs);
  config.threads = parse_threads(args.threads);
  config.spmv_reps = args.reps;
  config.convert_reps = args.convert_reps;
  config.warmup = args.warmup;
  config.l2_bytes = args.l2_bytes;
  config.split_threshold = args.split_threshold;
  config.seed = args.seed;
  config.format = args.format == "md" ? ReportFormat::Markdown : ReportFormat::Csv;
  validate(config);
  return config;
}

void write_report(const std::vector<BenchRecord>& records, const CommonArgs& args) {
  const auto text = emit_report(records, args.format == "md"
                                             ? ReportFormat::Markdown
                                             : ReportFormat::Csv);
  if (args.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(args.out);
  require(out.is_open(), ErrorKind::IoError, "cannot open " + args.out);
  out << text;
}

int run_bench(const CommonArgs& args, bool convert) {
  const BenchConfig config = to_config(args);
  std::vector<BenchRecord> records;
  for (const auto& file : matrix_files(args.matrix)) {
    const TripletMatrix a = load_matrix(file);
    const auto rows = convert ? bench_convert(a, file.stem().string(), config)
                              : bench_spmv(a, file.stem().string(), config);
    records.insert(records.end(), rows.begin(), rows.end());
  }
  write_report(records, args);
  return 0;
}

int run_verify(const CommonArgs& args) {
  const BenchConfig config = to_config(args);
  bool all_passed = true;
  for (const auto& file : matrix_files(args.matrix)) {
    const TripletMatrix a = load_matrix(file);
    const VerifyReport report = verify_matrix(a, config);
    std::printf("%s:\n", file.string().c_str());
    for (const auto& summary : report.summaries) {
      std::printf("  %-8s max relative error %.3e  %s\n",
                  algorithm_name(summary.algorithm), summary.max_rel_error,
                  summary.passed ? "ok" : "FAIL");
    }
    for (const auto& issue : report.issues) {
      std::printf("  mismatch: engine %s, threads %u, element %llu: got %.17g, "
                  "expected %.17g\n",
                  algorithm_name(issue.algorithm), issue.threads,
                  static_cast<unsigned long long>(issue.element), issue.got,
                  issue.expected);
    }
    all_passed = all_passed && report.passed;
  }
  std::printf("verify: %s\n", all_passed ? "PASS" : "FAIL");
  return all_passed ? 0 : 1;
}

int run_generate(const CommonArgs& args, std::uint64_t rows, std::uint64_t cols,
                 std::uint64_t nnz, double skew) {
  const TripletMatrix a =
      generate_synthetic(static_cast<index_t>(rows), static_cast<index_t>(cols),
                         nnz, skew, args.seed);
  require(!args.out.empty(), ErrorKind::InvalidArgument,
          "generate needs --out to know where to write the cache file");
  save_cache(a, args.out);
  std::printf("wrote %s: %llu x %llu, achieved nnz %llu (target %llu)\n",
              args.out.c_str(), static_cast<unsigned long long>(a.m),
              static_cast<unsigned long long>(a.n),
              static_cast<unsigned long long>(a.nnz()),
              static_cast<unsigned long long>(nnz));
  return 0;
}

int run_info(const CommonArgs& args) {
  for (const auto& file : matrix_files(args.matrix)) {
    const TripletMatrix a = load_matrix(file);
    const auto counts = row_counts(a);
    index_t max_row = 0;
    for (index_t c : counts) max_row = std::max(max_row, c);
    std::printf("%s\n", file.string().c_str());
    std::printf("  size      %llu x %llu\n", static_cast<unsigned long long>(a.m),
                static_cast<unsigned long long>(a.n));
    std::printf("  nonzeros  %llu\n", static_cast<unsigned long long>(a.nnz()));
    std::printf("  density   %.3e (%s class)\n", matrix_density(a),
                matrix_density(a) < density_class_threshold ? "low" : "higher");
    std::printf("  max nnz/row %llu\n", static_cast<unsigned long long>(max_row));
    const BlockSize csb_beta =
        select_block_size(std::max<index_t>(a.n, 1), csb_index_bits_cap, args.l2_bytes);
    const BlockSize bcoh_beta =
        select_block_size(std::max<index_t>(a.n, 1), bcoh_index_bits_cap, args.l2_bytes);
    std::printf("  block side: %llu (CSB/MergeB), %llu (BCOH)\n",
                static_cast<unsigned long long>(csb_beta.beta),
                static_cast<unsigned long long>(bcoh_beta.beta));
    for (Algorithm alg :
         {Algorithm::SeqCrs, Algorithm::Csb, Algorithm::Csbh, Algorithm::Bcoh,
          Algorithm::Bcohc, Algorithm::Bcohch, Algorithm::Bcohchp,
          Algorithm::MergeB, Algorithm::MergeBH}) {
      const BuiltFormat format = build_format(alg, a, 1, {args.l2_bytes, 0, 1});
      const auto report = storage_report(format);
      std::printf("  %-8s %10zu index bytes + %10zu value bytes\n",
                  algorithm_name(alg), report.index_bytes(),
                  report.bytes("data"));
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  assert_clock_resolution();
  CLI::App app{"Shared-memory sparse matrix-vector multiplication toolkit"};
  app.require_subcommand(1);

  CommonArgs bench_args, convert_args, verify_args, generate_args, info_args;
  std::uint64_t gen_rows = 1u << 20;
  std::uint64_t gen_cols = 0;  // 0: square
  std::uint64_t gen_nnz = 1u << 24;
  double gen_skew = 0.7;

  auto* bench = app.add_subcommand("bench-spmv", "timed multiplication sweep");
  add_common_options(bench, bench_args, true);
  auto* convert = app.add_subcommand("bench-convert", "timed conversion sweep");
  add_common_options(convert, convert_args, true);
  auto* verify =
      app.add_subcommand("verify", "check every engine against the reference");
  add_common_options(verify, verify_args, true);
  auto* generate =
      app.add_subcommand("generate", "write a synthetic unstructured matrix");
  add_common_options(generate, generate_args, false);
  generate->add_option("--rows", gen_rows, "row count");
  generate->add_option("--cols", gen_cols, "column count (default: rows)");
  generate->add_option("--nnz", gen_nnz, "target nonzero count");
  generate->add_option("--skew", gen_skew,
                       "row power-law exponent (0: uniform rows)");
  auto* info = app.add_subcommand("info", "matrix shape and storage report");
  add_common_options(info, info_args, true);

  CLI11_PARSE(app, argc, argv);

  try {
    if (bench->parsed()) return run_bench(bench_args, false);
    if (convert->parsed()) return run_bench(convert_args, true);
    if (verify->parsed()) return run_verify(verify_args);
    if (generate->parsed()) {
      return run_generate(generate_args, gen_rows,
                          gen_cols == 0 ? gen_rows : gen_cols, gen_nnz, gen_skew);
    }
    if (info->parsed()) return run_info(info_args);
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
