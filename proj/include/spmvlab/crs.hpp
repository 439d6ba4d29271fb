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

#ifndef SPMVLAB_CRS_HPP
#define SPMVLAB_CRS_HPP

#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include "spmvlab/parallel.hpp"
#include "spmvlab/triplet.hpp"
#include "spmvlab/types.hpp"

namespace spmvlab {

/// Compressed row storage. Column indices are strictly increasing within each
/// row (required later for the positive ICRS increments).
struct CrsMatrix {
  index_t m = 0;
  index_t n = 0;
  std::vector<index_t> row_ptr;  // length m + 1
  std::vector<index_t> col_ind;  // length nnz
  std::vector<value_t> data;     // length nnz

  index_t nnz() const { return static_cast<index_t>(data.size()); }
};

/// Row-by-row kernel over the row_ptr array. Rows are processed in order with
/// a per-row running sum, so the result is bitwise deterministic.
inline void spmv_crs_seq(const CrsMatrix& a, const DenseVector& x, DenseVector& y) {
  require(x.size() == a.n, ErrorKind::DimensionMismatch,
          "x has length " + std::to_string(x.size()) + ", matrix has " +
              std::to_string(a.n) + " columns");
  require(y.size() == a.m, ErrorKind::DimensionMismatch,
          "y has length " + std::to_string(y.size()) + ", matrix has " +
              std::to_string(a.m) + " rows");
  for (index_t i = 0; i < a.m; ++i) {
    value_t sum = 0.0;
    for (index_t k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) {
      sum += a.data[k] * x[a.col_ind[k]];
    }
    y[i] = sum;
  }
}

inline DenseVector spmv_crs_seq(const CrsMatrix& a, const DenseVector& x) {
  DenseVector y(a.m, 0.0);
  spmv_crs_seq(a, x, y);
  return y;
}

/// Two-step conversion: sort a permutation of the entries by (row, col), then
/// populate row_ptr/col_ind/data in one pass.
inline CrsMatrix triplet_to_crs(const TripletMatrix& a, unsigned threads = 1) {
  CrsMatrix out;
  out.m = a.m;
  out.n = a.n;
  const index_t nnz = a.nnz();

  std::vector<index_t> perm(nnz);
  std::iota(perm.begin(), perm.end(), index_t{0});
  parallel_chunk_sort(perm.begin(), perm.end(), threads, [&](index_t l, index_t r) {
    if (a.row_ind[l] != a.row_ind[r]) return a.row_ind[l] < a.row_ind[r];
    return a.col_ind[l] < a.col_ind[r];
  });

  out.row_ptr.assign(static_cast<std::size_t>(a.m) + 1, 0);
  for (index_t r : a.row_ind) ++out.row_ptr[static_cast<std::size_t>(r) + 1];
  std::partial_sum(out.row_ptr.begin(), out.row_ptr.end(), out.row_ptr.begin());

  out.col_ind.resize(nnz);
  out.data.resize(nnz);
  for (index_t k = 0; k < nnz; ++k) {
    out.col_ind[k] = a.col_ind[perm[k]];
    out.data[k] = a.data[perm[k]];
  }
  return out;
}

/// Inverse of triplet_to_crs; entries appear in row-major order.
inline TripletMatrix crs_to_triplet(const CrsMatrix& a) {
  TripletMatrix out;
  out.m = a.m;
  out.n = a.n;
  out.row_ind.reserve(a.nnz());
  out.col_ind.assign(a.col_ind.begin(), a.col_ind.end());
  out.data.assign(a.data.begin(), a.data.end());
  for (index_t i = 0; i < a.m; ++i) {
    for (index_t k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) out.row_ind.push_back(i);
  }
  return out;
}

}  // namespace spmvlab

#endif  // SPMVLAB_CRS_HPP
