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

#ifndef SPMVLAB_BICRS_HPP
#define SPMVLAB_BICRS_HPP

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "spmvlab/crs.hpp"
#include "spmvlab/triplet.hpp"
#include "spmvlab/types.hpp"

namespace spmvlab {

/// Incremental compressed row storage. Column indices are replaced by
/// increments; a running index passing n signals a row change. col_inc has
/// nnz + 1 entries: col_inc[0] is the first column index, col_inc[k] is the
/// increment consumed after element k - 1, and col_inc[nnz] is a sentinel >= n
/// that terminates the final row. row_jump[0] is the first visited row; later
/// entries are the jumps taken at each row change.
template <typename Increment>
struct IncrementalRowStorage {
  index_t m = 0;
  index_t n = 0;
  std::vector<Increment> col_inc;   // length nnz + 1
  std::vector<Increment> row_jump;  // 1 + number of row changes (empty when nnz = 0)
  std::vector<value_t> data;        // length nnz

  index_t nnz() const { return static_cast<index_t>(data.size()); }
};

/// Unsigned increments: row-major order, strictly increasing columns per row.
using IcrsMatrix = IncrementalRowStorage<index_t>;

/// Signed increments: arbitrary element order.
using BicrsMatrix = IncrementalRowStorage<signed_index_t>;

/// Counters exposed by the replay loop so tests can check the overflow
/// discipline (the running index must reach [n, 2n) exactly once per row
/// termination, including the final sentinel exit).
struct ReplayStats {
  index_t overflow_events = 0;
  index_t row_jumps_consumed = 0;
};

namespace detail {

/// Core (B)ICRS replay. Calls visit(k, row, col) for each element in storage
/// order, validating the increment discipline as it goes.
template <typename Increment, typename Visit>
void replay_bicrs(const IncrementalRowStorage<Increment>& a, Visit&& visit,
                  ReplayStats* stats = nullptr) {
  const index_t nnz = a.nnz();
  require(a.col_inc.size() == static_cast<std::size_t>(nnz) + 1,
          ErrorKind::CorruptFormat, "col_inc must hold nnz + 1 entries");
  if (nnz == 0) return;
  require(!a.row_jump.empty(), ErrorKind::CorruptFormat, "missing first row jump");

  const auto n = static_cast<signed_index_t>(a.n);
  signed_index_t j = static_cast<signed_index_t>(a.col_inc[0]);
  signed_index_t i = static_cast<signed_index_t>(a.row_jump[0]);
  std::size_t r = 1;
  index_t k = 0;
  while (k < nnz) {
    while (j < n) {
      require(j >= 0, ErrorKind::CorruptFormat, "running column index went negative");
      require(i >= 0 && i < static_cast<signed_index_t>(a.m), ErrorKind::CorruptFormat,
              "running row index out of bounds");
      visit(k, static_cast<index_t>(i), static_cast<index_t>(j));
      ++k;
      j += static_cast<signed_index_t>(a.col_inc[k]);
    }
    require(j < 2 * n, ErrorKind::CorruptFormat,
            "running column index exited [0, 2n)");
    if (stats) ++stats->overflow_events;
    j -= n;
    if (k < nnz) {
      require(r < a.row_jump.size(), ErrorKind::CorruptFormat,
              "replay ran out of row jumps");
      i += static_cast<signed_index_t>(a.row_jump[r]);
      ++r;
      if (stats) ++stats->row_jumps_consumed;
    }
  }
  require(r == a.row_jump.size(), ErrorKind::CorruptFormat,
          "replay consumed the wrong number of row jumps");
}

}  // namespace detail

/// SpMV by increment replay; works for both ICRS and BICRS. For ICRS the
/// accumulation order matches spmv_crs_seq element for element.
template <typename Increment>
DenseVector spmv_bicrs_seq(const IncrementalRowStorage<Increment>& a,
                           const DenseVector& x, ReplayStats* stats = nullptr) {
  require(x.size() == a.n, ErrorKind::DimensionMismatch,
          "x has length " + std::to_string(x.size()) + ", matrix has " +
              std::to_string(a.n) + " columns");
  DenseVector y(a.m, 0.0);
  detail::replay_bicrs(
      a, [&](index_t k, index_t row, index_t col) { y[row] += a.data[k] * x[col]; },
      stats);
  return y;
}

/// Rebuilds the triplet form by replaying the increments.
template <typename Increment>
TripletMatrix bicrs_to_triplet(const IncrementalRowStorage<Increment>& a) {
  TripletMatrix out;
  out.m = a.m;
  out.n = a.n;
  out.row_ind.resize(a.nnz());
  out.col_ind.resize(a.nnz());
  out.data.assign(a.data.begin(), a.data.end());
  detail::replay_bicrs(a, [&](index_t k, index_t row, index_t col) {
    out.row_ind[k] = row;
    out.col_ind[k] = col;
  });
  return out;
}

/// CRS -> ICRS. row_jump gets one entry per nonempty row; the sentinel closing
/// the final row is exactly n.
inline IcrsMatrix crs_to_icrs(const CrsMatrix& a) {
  IcrsMatrix out;
  out.m = a.m;
  out.n = a.n;
  out.data.assign(a.data.begin(), a.data.end());
  out.col_inc.reserve(a.data.size() + 1);

  bool first = true;
  index_t prev_row = 0;
  index_t prev_col = 0;
  for (index_t i = 0; i < a.m; ++i) {
    for (index_t k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) {
      const index_t col = a.col_ind[k];
      if (first) {
        out.col_inc.push_back(col);
        out.row_jump.push_back(i);
        first = false;
      } else if (i != prev_row) {
        out.col_inc.push_back(col - prev_col + a.n);
        out.row_jump.push_back(i - prev_row);
      } else {
        out.col_inc.push_back(col - prev_col);
      }
      prev_row = i;
      prev_col = col;
    }
  }
  out.col_inc.push_back(a.n);
  return out;
}

/// Triplet -> BICRS with the elements laid out in the given visiting order
/// (any permutation of [0, nnz)).
inline BicrsMatrix triplet_to_bicrs(const TripletMatrix& a,
                                    std::span<const index_t> order) {
  require(order.size() == a.data.size(), ErrorKind::InvalidArgument,
          "element order must cover every nonzero exactly once");
  std::vector<bool> seen(a.data.size(), false);
  for (index_t id : order) {
    require(id < a.data.size() && !seen[id], ErrorKind::InvalidArgument,
            "element order is not a permutation");
    seen[id] = true;
  }

  BicrsMatrix out;
  out.m = a.m;
  out.n = a.n;
  out.col_inc.reserve(order.size() + 1);
  out.data.reserve(order.size());

  signed_index_t prev_row = 0;
  signed_index_t prev_col = 0;
  bool first = true;
  for (index_t id : order) {
    const auto row = static_cast<signed_index_t>(a.row_ind[id]);
    const auto col = static_cast<signed_index_t>(a.col_ind[id]);
    if (first) {
      out.col_inc.push_back(col);
      out.row_jump.push_back(row);
      first = false;
    } else if (row != prev_row) {
      out.col_inc.push_back(col - prev_col + static_cast<signed_index_t>(a.n));
      out.row_jump.push_back(row - prev_row);
    } else {
      out.col_inc.push_back(col - prev_col);
    }
    out.data.push_back(a.data[id]);
    prev_row = row;
    prev_col = col;
  }
  out.col_inc.push_back(static_cast<signed_index_t>(a.n));
  return out;
}

}  // namespace spmvlab

#endif  // SPMVLAB_BICRS_HPP
