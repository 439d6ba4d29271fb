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

#ifndef SPMVLAB_MERGEB_HPP
#define SPMVLAB_MERGEB_HPP

#include <numeric>
#include <vector>

#include "spmvlab/block_size.hpp"
#include "spmvlab/curves.hpp"
#include "spmvlab/packed_index.hpp"
#include "spmvlab/parallel.hpp"
#include "spmvlab/triplet.hpp"
#include "spmvlab/types.hpp"

namespace spmvlab {

/// CRS over sparse blocks: the nonempty blocks act as the nonzero elements of
/// a block matrix stored in CRS; each block stores packed triplets, row-wise
/// or in Hilbert order. Driven by the merge-path engine.
struct MergeBlockMatrix {
  index_t m = 0;
  index_t n = 0;
  BlockSize beta;
  bool hilbert_inside = false;
  index_t block_rows = 0;
  index_t block_cols = 0;
  std::vector<index_t> blk_row_ptr;   // block_rows + 1
  std::vector<index_t> blk_col_ind;   // one per nonempty block
  std::vector<index_t> blk_data_ptr;  // nonempty blocks + 1, offsets into packed
  std::vector<PackedIndex> packed;
  std::vector<value_t> data;

  index_t nnz() const { return static_cast<index_t>(data.size()); }
  index_t block_count() const { return static_cast<index_t>(blk_col_ind.size()); }
};

inline MergeBlockMatrix build_mergeb(const TripletMatrix& a, const BlockSize& beta,
                                     bool hilbert_inside, unsigned threads = 1) {
  require(a.m <= max_dimension && a.n <= max_dimension, ErrorKind::Overflow,
          "matrix dimension exceeds the supported index width");
  require(beta.beta >= 2 && beta.beta <= (index_t{1} << csb_index_bits_cap),
          ErrorKind::InvalidArgument, "block size outside the 16-bit packing cap");

  MergeBlockMatrix out;
  out.m = a.m;
  out.n = a.n;
  out.beta = beta;
  out.hilbert_inside = hilbert_inside;
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
    if (hilbert_inside) {
      return curve_rank(CurveKind::Hilbert, a.row_ind[l] & mask, a.col_ind[l] & mask,
                        lb) <
             curve_rank(CurveKind::Hilbert, a.row_ind[r] & mask, a.col_ind[r] & mask,
                        lb);
    }
    if ((a.row_ind[l] & mask) != (a.row_ind[r] & mask)) {
      return (a.row_ind[l] & mask) < (a.row_ind[r] & mask);
    }
    return (a.col_ind[l] & mask) < (a.col_ind[r] & mask);
  });

  out.blk_row_ptr.assign(static_cast<std::size_t>(out.block_rows) + 1, 0);
  out.packed.resize(nnz);
  out.data.resize(nnz);
  for (index_t k = 0; k < nnz; ++k) {
    const index_t id = perm[k];
    const index_t br = a.row_ind[id] >> lb;
    const index_t bc = a.col_ind[id] >> lb;
    if (k == 0 || br != (a.row_ind[perm[k - 1]] >> lb) ||
        bc != (a.col_ind[perm[k - 1]] >> lb)) {
      ++out.blk_row_ptr[br + 1];
      out.blk_col_ind.push_back(bc);
      out.blk_data_ptr.push_back(k);
    }
    out.packed[k] = pack_index(a.row_ind[id] & mask, a.col_ind[id] & mask);
    out.data[k] = a.data[id];
  }
  out.blk_data_ptr.push_back(nnz);
  std::partial_sum(out.blk_row_ptr.begin(), out.blk_row_ptr.end(),
                   out.blk_row_ptr.begin());
  return out;
}

inline TripletMatrix mergeb_to_triplet(const MergeBlockMatrix& a) {
  TripletMatrix out;
  out.m = a.m;
  out.n = a.n;
  out.row_ind.resize(a.nnz());
  out.col_ind.resize(a.nnz());
  out.data.assign(a.data.begin(), a.data.end());
  for (index_t br = 0; br < a.block_rows; ++br) {
    for (index_t t = a.blk_row_ptr[br]; t < a.blk_row_ptr[br + 1]; ++t) {
      const index_t bc = a.blk_col_ind[t];
      for (index_t k = a.blk_data_ptr[t]; k < a.blk_data_ptr[t + 1]; ++k) {
        out.row_ind[k] = (br << a.beta.log2_beta) + packed_row(a.packed[k]);
        out.col_ind[k] = (bc << a.beta.log2_beta) + packed_col(a.packed[k]);
      }
    }
  }
  return out;
}

}  // namespace spmvlab

#endif  // SPMVLAB_MERGEB_HPP
