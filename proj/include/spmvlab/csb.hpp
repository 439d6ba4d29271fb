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

#ifndef SPMVLAB_CSB_HPP
#define SPMVLAB_CSB_HPP

#include <numeric>
#include <vector>

#include "spmvlab/block_size.hpp"
#include "spmvlab/curves.hpp"
#include "spmvlab/packed_index.hpp"
#include "spmvlab/parallel.hpp"
#include "spmvlab/triplet.hpp"
#include "spmvlab/types.hpp"

namespace spmvlab {

/// Compressed sparse blocks: a dense block-level grid of sparse blocks whose
/// entries carry packed 16+16-bit in-block coordinates, sorted per block along
/// a space-filling curve (Z-Morton here, Hilbert for the CSBH variant).
struct CsbMatrix {
  index_t m = 0;
  index_t n = 0;
  BlockSize beta;
  CurveKind curve = CurveKind::ZMorton;
  index_t block_rows = 0;
  index_t block_cols = 0;
  std::vector<index_t> blk_ptr;  // block_rows * block_cols + 1, block-row-major
  std::vector<PackedIndex> packed;
  std::vector<value_t> data;

  index_t nnz() const { return static_cast<index_t>(data.size()); }
};

inline constexpr unsigned csb_index_bits_cap = 16;

/// Two-step conversion: sort a permutation by (block row, block col, in-block
/// curve rank), then populate blk_ptr and the packed entry arrays.
inline CsbMatrix build_csb(const TripletMatrix& a, const BlockSize& beta,
                           CurveKind curve, unsigned threads = 1) {
  require(a.m <= max_dimension && a.n <= max_dimension, ErrorKind::Overflow,
          "matrix dimension exceeds the supported index width");
  require(beta.beta >= 2 && beta.beta <= (index_t{1} << csb_index_bits_cap),
          ErrorKind::InvalidArgument, "block size outside the 16-bit packing cap");

  CsbMatrix out;
  out.m = a.m;
  out.n = a.n;
  out.beta = beta;
  out.curve = curve;
  out.block_rows = blocks_covering(a.m, beta);
  out.block_cols = blocks_covering(a.n, beta);

  const unsigned lb = beta.log2_beta;
  const index_t mask = beta.beta - 1;
  const index_t nnz = a.nnz();

  std::vector<index_t> perm(nnz);
  std::iota(perm.begin(), perm.end(), index_t{0});
  parallel_chunk_sort(perm.begin(), perm.end(), threads, [&](index_t l, index_t r) {
    const index_t brl = a.row_ind[l] >> lb, brr = a.row_ind[r] >> lb;
    if (brl != brr) return brl < brr;
    const index_t bcl = a.col_ind[l] >> lb, bcr = a.col_ind[r] >> lb;
    if (bcl != bcr) return bcl < bcr;
    return curve_rank(curve, a.row_ind[l] & mask, a.col_ind[l] & mask, lb) <
           curve_rank(curve, a.row_ind[r] & mask, a.col_ind[r] & mask, lb);
  });

  const std::size_t cells =
      static_cast<std::size_t>(out.block_rows) * out.block_cols;
  out.blk_ptr.assign(cells + 1, 0);
  for (index_t k = 0; k < nnz; ++k) {
    const std::size_t cell =
        static_cast<std::size_t>(a.row_ind[k] >> lb) * out.block_cols +
        (a.col_ind[k] >> lb);
    ++out.blk_ptr[cell + 1];
  }
  std::partial_sum(out.blk_ptr.begin(), out.blk_ptr.end(), out.blk_ptr.begin());

  out.packed.resize(nnz);
  out.data.resize(nnz);
  for (index_t k = 0; k < nnz; ++k) {
    const index_t id = perm[k];
    out.packed[k] = pack_index(a.row_ind[id] & mask, a.col_ind[id] & mask);
    out.data[k] = a.data[id];
  }
  return out;
}

/// Reconstructs the triplet form; entries appear in storage order.
inline TripletMatrix csb_to_triplet(const CsbMatrix& a) {
  TripletMatrix out;
  out.m = a.m;
  out.n = a.n;
  out.row_ind.resize(a.nnz());
  out.col_ind.resize(a.nnz());
  out.data.assign(a.data.begin(), a.data.end());
  for (index_t br = 0; br < a.block_rows; ++br) {
    for (index_t bc = 0; bc < a.block_cols; ++bc) {
      const std::size_t cell = static_cast<std::size_t>(br) * a.block_cols + bc;
      for (index_t k = a.blk_ptr[cell]; k < a.blk_ptr[cell + 1]; ++k) {
        out.row_ind[k] = (br << a.beta.log2_beta) + packed_row(a.packed[k]);
        out.col_ind[k] = (bc << a.beta.log2_beta) + packed_col(a.packed[k]);
      }
    }
  }
  return out;
}

}  // namespace spmvlab

#endif  // SPMVLAB_CSB_HPP
