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

#ifndef SPMVLAB_ENGINE_HPP
#define SPMVLAB_ENGINE_HPP

#include <array>
#include <string>
#include <variant>

#include "spmvlab/spmv_parallel.hpp"
#include "spmvlab/storage.hpp"

namespace spmvlab {

/// The eleven multiplication engines: the sequential CRS baseline, the three
/// state-of-the-art parallel algorithms, and the six blocking/ordering
/// hybrids.
enum class Algorithm {
  SeqCrs,
  ParCrs,
  Merge,
  Csb,
  Csbh,
  Bcoh,
  Bcohc,
  Bcohch,
  Bcohchp,
  MergeB,
  MergeBH,
};

inline constexpr std::array<Algorithm, 11> all_algorithms = {
    Algorithm::SeqCrs, Algorithm::ParCrs,  Algorithm::Merge,  Algorithm::Csb,
    Algorithm::Csbh,   Algorithm::Bcoh,    Algorithm::Bcohc,  Algorithm::Bcohch,
    Algorithm::Bcohchp, Algorithm::MergeB, Algorithm::MergeBH,
};

inline const char* algorithm_name(Algorithm alg) {
  switch (alg) {
    case Algorithm::SeqCrs: return "crs";
    case Algorithm::ParCrs: return "parcrs";
    case Algorithm::Merge: return "merge";
    case Algorithm::Csb: return "csb";
    case Algorithm::Csbh: return "csbh";
    case Algorithm::Bcoh: return "bcoh";
    case Algorithm::Bcohc: return "bcohc";
    case Algorithm::Bcohch: return "bcohch";
    case Algorithm::Bcohchp: return "bcohchp";
    case Algorithm::MergeB: return "mergeb";
    case Algorithm::MergeBH: return "mergebh";
  }
  return "unknown";
}

inline Algorithm algorithm_from_name(const std::string& name) {
  for (Algorithm alg : all_algorithms) {
    if (name == algorithm_name(alg)) return alg;
  }
  fail(ErrorKind::InvalidArgument, "unknown algorithm '" + name + "'");
}

/// Knobs shared by format construction and the multiply kernels.
struct EngineOptions {
  std::uint64_t l2_bytes = default_l2_bytes;
  std::size_t split_threshold = 0;  // 0: default 2*beta
  unsigned build_threads = 1;       // sort/population parallelism
};

/// A format instance ready to multiply.
using BuiltFormat = std::variant<CrsMatrix, CsbMatrix, BcohMatrix, MergeBlockMatrix>;

inline BlockSize engine_block_size(Algorithm alg, index_t n,
                                   const EngineOptions& opt) {
  const unsigned cap = (alg == Algorithm::Bcoh || alg == Algorithm::Bcohc ||
                        alg == Algorithm::Bcohch || alg == Algorithm::Bcohchp)
                           ? bcoh_index_bits_cap
                           : csb_index_bits_cap;
  return select_block_size(std::max<index_t>(n, 1), cap, opt.l2_bytes);
}

/// Converts the triplet form into the storage format required by `alg`.
/// `threads` is baked into the BCOH band structure; the other formats ignore
/// it beyond build parallelism.
inline BuiltFormat build_format(Algorithm alg, const TripletMatrix& a,
                                unsigned threads, const EngineOptions& opt = {}) {
  const BlockSize beta = engine_block_size(alg, a.n, opt);
  switch (alg) {
    case Algorithm::SeqCrs:
    case Algorithm::ParCrs:
    case Algorithm::Merge:
      return triplet_to_crs(a, opt.build_threads);
    case Algorithm::Csb:
      return build_csb(a, beta, CurveKind::ZMorton, opt.build_threads);
    case Algorithm::Csbh:
      return build_csb(a, beta, CurveKind::Hilbert, opt.build_threads);
    case Algorithm::Bcoh:
      return build_bcoh(a, beta, threads, bcoh_variant, opt.build_threads);
    case Algorithm::Bcohc:
      return build_bcoh(a, beta, threads, bcohc_variant, opt.build_threads);
    case Algorithm::Bcohch:
      return build_bcoh(a, beta, threads, bcohch_variant, opt.build_threads);
    case Algorithm::Bcohchp:
      return build_bcoh(a, beta, threads, bcohchp_variant, opt.build_threads);
    case Algorithm::MergeB:
      return build_mergeb(a, beta, false, opt.build_threads);
    case Algorithm::MergeBH:
      return build_mergeb(a, beta, true, opt.build_threads);
  }
  fail(ErrorKind::InvalidArgument, "unknown algorithm");
}

/// Runs one multiplication with p workers into a caller-owned output vector
/// (so timed loops carry no allocation); y is fully overwritten.
inline void run_spmv(Algorithm alg, const BuiltFormat& format, const DenseVector& x,
                     DenseVector& y, unsigned p, const EngineOptions& opt = {}) {
  switch (alg) {
    case Algorithm::SeqCrs:
      return spmv_crs_seq(std::get<CrsMatrix>(format), x, y);
    case Algorithm::ParCrs:
      return spmv_parcrs(std::get<CrsMatrix>(format), x, y, p);
    case Algorithm::Merge:
      return spmv_merge(std::get<CrsMatrix>(format), x, y, p);
    case Algorithm::Csb:
    case Algorithm::Csbh:
      return spmv_csb(std::get<CsbMatrix>(format), x, y, p, opt.split_threshold);
    case Algorithm::Bcoh:
    case Algorithm::Bcohc:
    case Algorithm::Bcohch:
    case Algorithm::Bcohchp:
      return spmv_bcoh(std::get<BcohMatrix>(format), x, y, p);
    case Algorithm::MergeB:
    case Algorithm::MergeBH:
      return spmv_mergeb(std::get<MergeBlockMatrix>(format), x, y, p);
  }
  fail(ErrorKind::InvalidArgument, "unknown algorithm");
}

inline DenseVector run_spmv(Algorithm alg, const BuiltFormat& format,
                            const DenseVector& x, unsigned p,
                            const EngineOptions& opt = {}) {
  DenseVector y(std::visit([](const auto& f) { return f.m; }, format), 0.0);
  run_spmv(alg, format, x, y, p, opt);
  return y;
}

inline StorageBreakdown storage_report(const BuiltFormat& format) {
  return std::visit([](const auto& f) { return storage_report(f); }, format);
}

}  // namespace spmvlab

#endif  // SPMVLAB_ENGINE_HPP
