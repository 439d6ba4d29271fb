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

#ifndef SPMVLAB_TRIPLET_HPP
#define SPMVLAB_TRIPLET_HPP

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include "spmvlab/types.hpp"

namespace spmvlab {

/// Coordinate (triplet) storage: one (row, col, value) entry per nonzero.
/// Ground truth for every conversion and the reference kernel.
struct TripletMatrix {
  index_t m = 0;
  index_t n = 0;
  std::vector<index_t> row_ind;
  std::vector<index_t> col_ind;
  std::vector<value_t> data;

  index_t nnz() const { return static_cast<index_t>(data.size()); }
};

/// Checks the triplet invariants: equal array lengths, in-range coordinates,
/// no duplicate (row, col) pairs. Throws on violation.
inline void validate(const TripletMatrix& a) {
  require(a.row_ind.size() == a.data.size() && a.col_ind.size() == a.data.size(),
          ErrorKind::InvalidArgument, "triplet arrays must have equal length");
  require(a.m <= max_dimension && a.n <= max_dimension, ErrorKind::Overflow,
          "matrix dimension exceeds the supported index width");
  for (std::size_t i = 0; i < a.data.size(); ++i) {
    require(a.row_ind[i] < a.m && a.col_ind[i] < a.n, ErrorKind::IndexOutOfRange,
            "entry " + std::to_string(i) + " outside the matrix shape");
  }
  // Duplicate detection via a sorted shadow of the coordinates.
  std::vector<std::uint64_t> keys(a.data.size());
  for (std::size_t i = 0; i < keys.size(); ++i) {
    keys[i] = (static_cast<std::uint64_t>(a.row_ind[i]) << 32) | a.col_ind[i];
  }
  std::sort(keys.begin(), keys.end());
  require(std::adjacent_find(keys.begin(), keys.end()) == keys.end(),
          ErrorKind::DuplicateEntry, "duplicate (row, col) coordinate");
}

/// y = Ax straight off the triplet arrays, accumulating in entry-index order.
/// This is the semantic reference every other kernel is checked against.
inline DenseVector spmv_triplet(const TripletMatrix& a, const DenseVector& x) {
  require(x.size() == a.n, ErrorKind::DimensionMismatch,
          "x has length " + std::to_string(x.size()) + ", matrix has " +
              std::to_string(a.n) + " columns");
  DenseVector y(a.m, 0.0);
  for (std::size_t i = 0; i < a.data.size(); ++i) {
    y[a.row_ind[i]] += a.data[i] * x[a.col_ind[i]];
  }
  return y;
}

/// Number of nonzeros per row, length m.
inline std::vector<index_t> row_counts(const TripletMatrix& a) {
  std::vector<index_t> counts(a.m, 0);
  for (index_t r : a.row_ind) ++counts[r];
  return counts;
}

/// Exclusive prefix sums over per-row counts, length m+1.
inline std::vector<index_t> row_prefix(const TripletMatrix& a) {
  std::vector<index_t> prefix(static_cast<std::size_t>(a.m) + 1, 0);
  for (index_t r : a.row_ind) ++prefix[static_cast<std::size_t>(r) + 1];
  std::partial_sum(prefix.begin(), prefix.end(), prefix.begin());
  return prefix;
}

}  // namespace spmvlab

#endif  // SPMVLAB_TRIPLET_HPP
