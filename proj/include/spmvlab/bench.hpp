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

#ifndef SPMVLAB_BENCH_HPP
#define SPMVLAB_BENCH_HPP

#include <algorithm>
#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "spmvlab/engine.hpp"
#include "spmvlab/synthetic.hpp"
#include "spmvlab/triplet.hpp"

namespace spmvlab {

enum class ReportFormat { Csv, Markdown };

/// Measurement protocol knobs. The repetition defaults are the protocol
/// constants: 550 timed multiplications and 25 timed conversions, minimum
/// taken over the runs.
struct BenchConfig {
  std::vector<Algorithm> algorithms{all_algorithms.begin(), all_algorithms.end()};
  std::vector<unsigned> threads;  // empty: 1..hardware powers of two
  unsigned spmv_reps = 550;
  unsigned convert_reps = 25;
  unsigned warmup = 5;
  std::uint64_t l2_bytes = default_l2_bytes;
  std::size_t split_threshold = 0;
  std::uint64_t seed = 1;
  ReportFormat format = ReportFormat::Csv;
};

/// Density threshold splitting the report into the low/high classes.
inline constexpr double density_class_threshold = 1e-6;

/// One measurement row. speedup is seq-CRS min time over this row's min time;
/// conversion fields are filled by bench_convert only. density rides along so
/// reports can group rows into the two density classes.
struct BenchRecord {
  std::string matrix;
  Algorithm algorithm = Algorithm::SeqCrs;
  unsigned threads = 1;
  double min_time = 0.0;
  double speedup = 0.0;
  std::optional<double> convert_time;
  std::optional<double> convert_ratio;
  double density = 0.0;
  std::string status = "ok";

  bool operator==(const BenchRecord&) const = default;
};

/// 1..hardware_threads in powers of two.
inline std::vector<unsigned> default_thread_sweep() {
  std::vector<unsigned> sweep;
  const unsigned cores = hardware_threads();
  for (unsigned p = 1; p <= cores; p *= 2) sweep.push_back(p);
  return sweep;
}

inline void validate(const BenchConfig& config) {
  require(config.spmv_reps >= 1 && config.convert_reps >= 1,
          ErrorKind::InvalidArgument, "repetition counts must be >= 1");
  require(!config.algorithms.empty(), ErrorKind::InvalidArgument,
          "algorithm list must not be empty");
  for (unsigned p : config.threads) {
    require(p >= 1, ErrorKind::InvalidArgument, "thread counts must be >= 1");
  }
}

inline std::vector<unsigned> effective_threads(const BenchConfig& config) {
  return config.threads.empty() ? default_thread_sweep() : config.threads;
}

/// Minimum wall time of `reps` calls after `warmup` untimed calls. The timed
/// region is exactly one fn() invocation. Clock is a template parameter so the
/// minimum-of-runs protocol can be tested against replayed fake clocks.
template <typename Clock = std::chrono::steady_clock, typename Fn>
double min_time_of(unsigned reps, unsigned warmup, Fn&& fn) {
  require(reps >= 1, ErrorKind::InvalidArgument, "need at least one repetition");
  for (unsigned w = 0; w < warmup; ++w) fn();
  double best = std::numeric_limits<double>::infinity();
  for (unsigned r = 0; r < reps; ++r) {
    const auto t0 = Clock::now();
    fn();
    const auto t1 = Clock::now();
    best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
  }
  return best;
}

/// The monotonic clock used for all measurements must tick below 1 us.
inline void assert_clock_resolution() {
  using period = std::chrono::steady_clock::period;
  static_assert(static_cast<double>(period::num) / period::den < 1e-6,
                "steady_clock resolution is coarser than 1 us");
}

// --- verification -----------------------------------------------------------

inline constexpr double verify_rel_tolerance = 1e-12;
inline constexpr double verify_abs_floor = 1e-300;

inline double relative_error(double got, double expected) {
  return std::abs(got - expected) /
         std::max(std::abs(expected), verify_abs_floor);
}

struct VerifyIssue {
  Algorithm algorithm;
  unsigned threads;
  index_t element;
  double got;
  double expected;
  double rel_error;
};

struct EngineErrorSummary {
  Algorithm algorithm;
  double max_rel_error = 0.0;
  bool passed = true;
};

struct VerifyReport {
  bool passed = true;
  std::vector<VerifyIssue> issues;
  std::vector<EngineErrorSummary> summaries;
};

/// Deterministic strictly positive input vector; positive data plus positive x
/// keeps row sums free of catastrophic cancellation, so the relative
/// tolerance is meaningful.
inline DenseVector verification_input(index_t n, std::uint64_t seed = 1) {
  DenseVector x(n);
  std::uint64_t state = seed * 0x9E3779B97F4A7C15ull + 1;
  for (index_t i = 0; i < n; ++i) {
    state = state * 6364136223846793005ull + 1442695040888963407ull;
    x[i] = 0.5 + static_cast<double>(state >> 11) * 0x1.0p-53;
  }
  return x;
}

/// Compares one engine output against the reference, recording the first
/// offending element (if any) and the maximum relative error.
inline void verify_against(const DenseVector& got, const DenseVector& expected,
                           Algorithm alg, unsigned threads, VerifyReport& report,
                           EngineErrorSummary& summary) {
  bool recorded = false;
  for (index_t i = 0; i < got.size(); ++i) {
    const double err = relative_error(got[i], expected[i]);
    summary.max_rel_error = std::max(summary.max_rel_error, err);
    if (err > verify_rel_tolerance) {
      summary.passed = false;
      report.passed = false;
      if (!recorded) {
        report.issues.push_back({alg, threads, i, got[i], expected[i], err});
        recorded = true;
      }
    }
  }
}

/// Runs every configured engine across the thread list against the triplet
/// reference kernel.
inline VerifyReport verify_matrix(const TripletMatrix& a, const BenchConfig& config) {
  validate(config);
  VerifyReport report;
  const DenseVector x = verification_input(a.n, config.seed);
  const DenseVector expected = spmv_triplet(a, x);
  EngineOptions opt{config.l2_bytes, config.split_threshold, 1};
  for (Algorithm alg : config.algorithms) {
    EngineErrorSummary summary{alg};
    for (unsigned p : effective_threads(config)) {
      const BuiltFormat format = build_format(alg, a, p, opt);
      const DenseVector y = run_spmv(alg, format, x, p, opt);
      verify_against(y, expected, alg, p, report, summary);
    }
    report.summaries.push_back(summary);
  }
  return report;
}

// --- measurement ------------------------------------------------------------

inline double matrix_density(const TripletMatrix& a) {
  if (a.m == 0 || a.n == 0) return 0.0;
  return static_cast<double>(a.nnz()) /
         (static_cast<double>(a.m) * static_cast<double>(a.n));
}

namespace detail {

inline void sort_records(std::vector<BenchRecord>& records) {
  std::stable_sort(records.begin(), records.end(),
                   [](const BenchRecord& l, const BenchRecord& r) {
                     if (l.matrix != r.matrix) return l.matrix < r.matrix;
                     if (l.algorithm != r.algorithm) return l.algorithm < r.algorithm;
                     return l.threads < r.threads;
                   });
}

/// Minimum multiply time of the sequential CRS baseline, measured once per
/// matrix with the configured repetition protocol.
inline double baseline_seq_crs(const TripletMatrix& a, const DenseVector& x,
                               const BenchConfig& config) {
  const CrsMatrix crs = triplet_to_crs(a);
  DenseVector y(a.m, 0.0);
  return min_time_of(config.spmv_reps, config.warmup,
                     [&] { spmv_crs_seq(crs, x, y); });
}

}  // namespace detail

/// Timed multiplication sweep: for each (algorithm, threads) the format is
/// built once, the result is checked against the triplet oracle, and the
/// minimum of spmv_reps timed multiplications is recorded. Build or
/// verification failures are recorded in the row's status and the sweep
/// continues.
inline std::vector<BenchRecord> bench_spmv(const TripletMatrix& a,
                                           const std::string& matrix_name,
                                           const BenchConfig& config) {
  validate(config);
  std::vector<BenchRecord> records;
  const double density = matrix_density(a);
  const DenseVector x = verification_input(a.n, config.seed);
  const DenseVector expected = spmv_triplet(a, x);
  const double t_seq = detail::baseline_seq_crs(a, x, config);

  for (Algorithm alg : config.algorithms) {
    for (unsigned p : effective_threads(config)) {
      BenchRecord record;
      record.matrix = matrix_name;
      record.algorithm = alg;
      record.threads = p;
      record.density = density;
      try {
        EngineOptions opt{config.l2_bytes, config.split_threshold, p};
        const BuiltFormat format = build_format(alg, a, p, opt);
        DenseVector y(a.m, 0.0);
        run_spmv(alg, format, x, y, p, opt);
        VerifyReport scratch;
        EngineErrorSummary summary{alg};
        verify_against(y, expected, alg, p, scratch, summary);
        if (!scratch.passed) {
          record.status = "verify failed at element " +
                          std::to_string(scratch.issues.front().element);
        } else {
          record.min_time = min_time_of(config.spmv_reps, config.warmup,
                                        [&] { run_spmv(alg, format, x, y, p, opt); });
          record.speedup = record.min_time > 0.0
                               ? t_seq / record.min_time
                               : std::numeric_limits<double>::infinity();
        }
      } catch (const Error& e) {
        record.status = e.what();
      }
      records.push_back(std::move(record));
    }
  }
  detail::sort_records(records);
  return records;
}

/// Timed conversion sweep: per (algorithm, threads), the minimum of
/// convert_reps triplet-to-format conversions, with the ratio column
/// normalized by this session's fastest ParCRS multiplication.
inline std::vector<BenchRecord> bench_convert(const TripletMatrix& a,
                                              const std::string& matrix_name,
                                              const BenchConfig& config) {
  validate(config);
  std::vector<BenchRecord> records;
  const double density = matrix_density(a);
  const DenseVector x = verification_input(a.n, config.seed);

  // Fastest ParCRS multiplication across the thread list (the denominator of
  // the conversion ratio).
  const CrsMatrix crs = triplet_to_crs(a);
  DenseVector y(a.m, 0.0);
  double parcrs_best = std::numeric_limits<double>::infinity();
  for (unsigned p : effective_threads(config)) {
    parcrs_best = std::min(
        parcrs_best, min_time_of(config.spmv_reps, config.warmup,
                                 [&] { spmv_parcrs(crs, x, y, p); }));
  }

  for (Algorithm alg : config.algorithms) {
    for (unsigned p : effective_threads(config)) {
      BenchRecord record;
      record.matrix = matrix_name;
      record.algorithm = alg;
      record.threads = p;
      record.density = density;
      try {
        EngineOptions opt{config.l2_bytes, config.split_threshold, p};
        const double t = min_time_of(config.convert_reps, config.warmup, [&] {
          BuiltFormat format = build_format(alg, a, p, opt);
          (void)format;
        });
        record.convert_time = t;
        record.convert_ratio = t / parcrs_best;
      } catch (const Error& e) {
        record.status = e.what();
      }
      records.push_back(std::move(record));
    }
  }
  detail::sort_records(records);
  return records;
}

// --- reports ----------------------------------------------------------------

namespace detail {

inline std::string format_double(double value) {
  std::array<char, 64> buffer;
  auto [ptr, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
  require(ec == std::errc{}, ErrorKind::IoError, "double formatting failed");
  return std::string(buffer.data(), ptr);
}

inline double parse_double(const std::string& token) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  require(ec == std::errc{} && ptr == token.data() + token.size(),
          ErrorKind::ParseError, "bad numeric field '" + token + "'");
  return value;
}

inline std::string sanitize_csv_field(std::string s) {
  for (char& c : s) {
    if (c == ',' || c == '\n') c = ';';
  }
  return s;
}

inline std::string format_fixed(double value, int digits) {
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(digits);
  out << value;
  return out.str();
}

}  // namespace detail

inline constexpr const char* csv_header =
    "matrix,algorithm,threads,min_time_s,speedup,convert_time_s,convert_ratio,"
    "density,status";

inline std::string emit_csv(const std::vector<BenchRecord>& records) {
  std::string out = csv_header;
  out += '\n';
  for (const auto& r : records) {
    out += detail::sanitize_csv_field(r.matrix);
    out += ',';
    out += algorithm_name(r.algorithm);
    out += ',';
    out += std::to_string(r.threads);
    out += ',';
    out += detail::format_double(r.min_time);
    out += ',';
    out += detail::format_double(r.speedup);
    out += ',';
    if (r.convert_time) out += detail::format_double(*r.convert_time);
    out += ',';
    if (r.convert_ratio) out += detail::format_double(*r.convert_ratio);
    out += ',';
    out += detail::format_double(r.density);
    out += ',';
    out += detail::sanitize_csv_field(r.status);
    out += '\n';
  }
  return out;
}

/// Inverse of emit_csv; shortest-round-trip formatting makes the records
/// reproduce exactly.
inline std::vector<BenchRecord> parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  require(static_cast<bool>(std::getline(in, line)), ErrorKind::ParseError,
          "empty CSV");
  require(line == csv_header, ErrorKind::ParseError, "unexpected CSV header");
  std::vector<BenchRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
      const auto comma = line.find(',', start);
      fields.push_back(line.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    require(fields.size() == 9, ErrorKind::ParseError,
            "expected 9 CSV fields, got " + std::to_string(fields.size()));
    BenchRecord r;
    r.matrix = fields[0];
    r.algorithm = algorithm_from_name(fields[1]);
    r.threads = static_cast<unsigned>(std::stoul(fields[2]));
    r.min_time = detail::parse_double(fields[3]);
    r.speedup = detail::parse_double(fields[4]);
    if (!fields[5].empty()) r.convert_time = detail::parse_double(fields[5]);
    if (!fields[6].empty()) r.convert_ratio = detail::parse_double(fields[6]);
    r.density = detail::parse_double(fields[7]);
    r.status = fields[8];
    records.push_back(std::move(r));
  }
  return records;
}

/// Markdown report in the style of the paper-type summary grids: one section
/// per density class, algorithms down the rows, matrices across the columns,
/// best speedup per column in bold (ties all bold) with the thread count in
/// parentheses. A conversion-ratio grid follows when conversion data is
/// present.
inline std::string emit_markdown(const std::vector<BenchRecord>& records) {
  struct Best {
    double speedup = 0.0;
    unsigned threads = 0;
    bool present = false;
  };
  // matrix -> density class, per-class column order preserved by first
  // appearance.
  std::vector<std::string> low_cols, high_cols;
  std::map<std::string, std::map<Algorithm, Best>> best_speedup;
  std::map<std::string, std::map<Algorithm, double>> best_ratio;
  std::vector<Algorithm> algs;
  for (const auto& r : records) {
    auto& cols = r.density < density_class_threshold ? low_cols : high_cols;
    if (std::find(cols.begin(), cols.end(), r.matrix) == cols.end()) {
      cols.push_back(r.matrix);
    }
    if (std::find(algs.begin(), algs.end(), r.algorithm) == algs.end()) {
      algs.push_back(r.algorithm);
    }
    if (r.status == "ok" && r.min_time > 0.0) {
      Best& b = best_speedup[r.matrix][r.algorithm];
      if (!b.present || r.speedup > b.speedup) {
        b = {r.speedup, r.threads, true};
      }
    }
    if (r.convert_ratio) {
      auto [it, inserted] =
          best_ratio[r.matrix].try_emplace(r.algorithm, *r.convert_ratio);
      if (!inserted) it->second = std::min(it->second, *r.convert_ratio);
    }
  }

  std::ostringstream out;
  out << "# SpMV benchmark report\n\n";
  out << "Minimum-of-runs protocol; speedups relative to sequential CRS. "
         "Threads are not pinned to cores.\n";

  auto emit_class = [&](const std::string& title,
                        const std::vector<std::string>& cols) {
    if (cols.empty()) return;
    out << "\n## " << title << "\n\n";
    const bool any_speedup = std::any_of(
        cols.begin(), cols.end(), [&](const std::string& m) {
          const auto it = best_speedup.find(m);
          return it != best_speedup.end() && !it->second.empty();
        });
    if (any_speedup) {
      out << "| Method |";
      for (const auto& m : cols) out << ' ' << m << " |";
      out << "\n|---|";
      for (std::size_t i = 0; i < cols.size(); ++i) out << "---|";
      out << '\n';
      for (Algorithm alg : algs) {
        out << "| " << algorithm_name(alg) << " |";
        for (const auto& m : cols) {
          const auto mit = best_speedup.find(m);
          if (mit == best_speedup.end()) {
            out << " - |";
            continue;
          }
          const auto it = mit->second.find(alg);
          if (it == mit->second.end() || !it->second.present) {
            out << " - |";
            continue;
          }
          double column_best = 0.0;
          for (const auto& [a, b] : mit->second) {
            column_best = std::max(column_best, b.speedup);
          }
          const bool bold = it->second.speedup == column_best;
          out << ' ';
          if (bold) out << "**";
          out << detail::format_fixed(it->second.speedup, 2);
          if (bold) out << "**";
          out << " (" << it->second.threads << ") |";
        }
        out << '\n';
      }
    }
    // Conversion grid.
    const bool any_ratio =
        std::any_of(cols.begin(), cols.end(), [&](const std::string& m) {
          return best_ratio.count(m) != 0;
        });
    if (any_ratio) {
      out << "\nConversion cost (ParCRS multiplications):\n\n";
      out << "| Method |";
      for (const auto& m : cols) out << ' ' << m << " |";
      out << "\n|---|";
      for (std::size_t i = 0; i < cols.size(); ++i) out << "---|";
      out << '\n';
      for (Algorithm alg : algs) {
        out << "| " << algorithm_name(alg) << " |";
        for (const auto& m : cols) {
          const auto mit = best_ratio.find(m);
          if (mit == best_ratio.end() || !mit->second.count(alg)) {
            out << " - |";
            continue;
          }
          out << ' ' << detail::format_fixed(mit->second.at(alg), 1) << " |";
        }
        out << '\n';
      }
    }
  };

  emit_class("Low density (< 1e-6)", low_cols);
  emit_class("Higher density (>= 1e-6)", high_cols);
  return out.str();
}

inline std::string emit_report(const std::vector<BenchRecord>& records,
                               ReportFormat format) {
  require(!records.empty(), ErrorKind::InvalidArgument, "no records to report");
  return format == ReportFormat::Csv ? emit_csv(records) : emit_markdown(records);
}

}  // namespace spmvlab

#endif  // SPMVLAB_BENCH_HPP
