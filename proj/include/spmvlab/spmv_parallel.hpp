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

#ifndef SPMVLAB_SPMV_PARALLEL_HPP
#define SPMVLAB_SPMV_PARALLEL_HPP

#include <atomic>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "spmvlab/bcoh.hpp"
#include "spmvlab/crs.hpp"
#include "spmvlab/csb.hpp"
#include "spmvlab/curves.hpp"
#include "spmvlab/mergeb.hpp"
#include "spmvlab/parallel.hpp"
#include "spmvlab/types.hpp"

namespace spmvlab {

/// Point (i, j) on a merge-path diagonal: i items consumed from list A, j from
/// list B, i + j = diagonal.
struct MergePathPoint {
  std::size_t i = 0;
  std::size_t j = 0;

  bool operator==(const MergePathPoint&) const = default;
};

/// Locates the merge path's crossing of the given diagonal for two
/// nondecreasing lists exposed through accessors. The path consumes from A on
/// ties, i.e. the result is the largest i with A[i-1] <= B[diag-i] under the
/// sentinel conventions A[-1] = -inf, B[|B|] = +inf.
template <typename GetA, typename GetB>
MergePathPoint diagonal_search(std::size_t a_len, std::size_t b_len,
                               std::size_t diag, GetA&& a, GetB&& b) {
  require(diag <= a_len + b_len, ErrorKind::InvalidArgument,
          "diagonal beyond the end of the merge path");
  auto pred = [&](std::size_t i) {
    if (i == 0) return true;
    const std::size_t j = diag - i;
    if (j >= b_len) return true;
    return !(b(j) < a(i - 1));  // A[i-1] <= B[j]
  };
  std::size_t lo = diag > b_len ? diag - b_len : 0;
  std::size_t hi = std::min(diag, a_len);
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo + 1) / 2;
    if (pred(mid)) {
      lo = mid;
    } else {
      hi = mid - 1;
    }
  }
  return {lo, diag - lo};
}

/// Convenience overload for two materialized lists.
inline MergePathPoint diagonal_search(std::span<const index_t> a,
                                      std::span<const index_t> b,
                                      std::size_t diag) {
  return diagonal_search(
      a.size(), b.size(), diag, [&](std::size_t i) { return a[i]; },
      [&](std::size_t j) { return b[j]; });
}

/// Diagonals delimiting each worker's band: worker w consumes merge items
/// [bounds[w], bounds[w+1]), so per-worker counts differ by at most one.
inline std::vector<std::size_t> merge_diagonals(std::size_t total, unsigned p) {
  std::vector<std::size_t> bounds(p + 1);
  for (unsigned w = 0; w <= p; ++w) bounds[w] = total * w / p;
  return bounds;
}

namespace detail {

inline void check_spmv_args(std::size_t x_len, index_t n, std::size_t y_len,
                            index_t m, unsigned p) {
  require(x_len == n, ErrorKind::DimensionMismatch,
          "x has length " + std::to_string(x_len) + ", matrix has " +
              std::to_string(n) + " columns");
  require(y_len == m, ErrorKind::DimensionMismatch,
          "y has length " + std::to_string(y_len) + ", matrix has " +
              std::to_string(m) + " rows");
  require(p >= 1, ErrorKind::InvalidArgument, "worker count must be >= 1");
}

}  // namespace detail

/// Chunked-dynamic CRS: workers claim runs of 512 rows off a shared counter;
/// each row is summed by exactly one worker in the sequential per-row order,
/// so the result is bitwise equal to spmv_crs_seq.
inline void spmv_parcrs(const CrsMatrix& a, const DenseVector& x, DenseVector& y,
                        unsigned p) {
  detail::check_spmv_args(x.size(), a.n, y.size(), a.m, p);
  constexpr index_t chunk = 512;
  std::atomic<index_t> next{0};
  parallel_run(p, [&](unsigned) {
    for (;;) {
      const index_t begin = next.fetch_add(chunk, std::memory_order_relaxed);
      if (begin >= a.m) break;
      const index_t end = std::min<index_t>(a.m, begin + chunk);
      for (index_t i = begin; i < end; ++i) {
        value_t sum = 0.0;
        for (index_t k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) {
          sum += a.data[k] * x[a.col_ind[k]];
        }
        y[i] = sum;
      }
    }
  });
}

/// Merge-path CRS: the row_ptr tail and the nonzero indices are merged along
/// equal diagonal bands; unfinished rows leave a (row, partial) carry-out that
/// is combined sequentially afterwards.
inline void spmv_merge(const CrsMatrix& a, const DenseVector& x, DenseVector& y,
                       unsigned p) {
  detail::check_spmv_args(x.size(), a.n, y.size(), a.m, p);
  const std::size_t total = static_cast<std::size_t>(a.m) + a.nnz();
  if (total == 0) return;

  const auto bounds = merge_diagonals(total, p);
  std::vector<index_t> carry_row(p, a.m);
  DenseVector carry_value(p, 0.0);
  auto row_end = [&](std::size_t i) { return a.row_ptr[i + 1]; };
  auto natural = [&](std::size_t j) { return static_cast<index_t>(j); };

  parallel_run(p, [&](unsigned w) {
    auto [i, j] = diagonal_search(a.m, a.nnz(), bounds[w], row_end, natural);
    const auto [i_end, j_end] =
        diagonal_search(a.m, a.nnz(), bounds[w + 1], row_end, natural);
    value_t temp = 0.0;
    for (; i < i_end; ++i) {
      for (; j < a.row_ptr[i + 1]; ++j) temp += a.data[j] * x[a.col_ind[j]];
      y[i] = temp;
      temp = 0.0;
    }
    for (; j < j_end; ++j) temp += a.data[j] * x[a.col_ind[j]];
    carry_row[w] = static_cast<index_t>(i_end);
    carry_value[w] = temp;
  });

  for (unsigned w = 0; w < p; ++w) {
    if (carry_row[w] < a.m) y[carry_row[w]] += carry_value[w];
  }
}

namespace detail {

/// One unit of CSB work: the cells [cell_begin, cell_end) of a block row,
/// clipped to the element range [elem_begin, elem_end). temp_slot < 0 writes
/// straight into y (the task owns the whole block row).
struct CsbWorkItem {
  index_t block_row;
  index_t cell_begin;
  index_t cell_end;
  std::size_t elem_begin;
  std::size_t elem_end;
  std::int32_t temp_slot;
};

/// Recursively splits one overfull block's curve-sorted element range into
/// quadrant leaves of at most `threshold` elements.
inline void split_block_range(const CsbMatrix& a, std::size_t begin, std::size_t end,
                              index_t dim, HilbertOrientation orientation,
                              std::size_t threshold,
                              std::vector<std::pair<std::size_t, std::size_t>>& leaves) {
  if (end - begin <= threshold || dim == 1) {
    if (end > begin) leaves.emplace_back(begin, end);
    return;
  }
  const std::span<const PackedIndex> packed(a.packed.data() + begin, end - begin);
  const auto offsets = quadrant_boundaries(packed, dim, a.curve, orientation);
  const std::size_t cut[5] = {0, offsets[0], offsets[1], offsets[2], end - begin};
  for (unsigned pos = 0; pos < 4; ++pos) {
    split_block_range(a, begin + cut[pos], begin + cut[pos + 1], dim >> 1,
                      quadrant_child(a.curve, orientation, pos), threshold, leaves);
  }
}

}  // namespace detail

/// Task-parallel CSB: one task per block row, split into temporary-vector
/// sub-tasks when it exceeds the threshold; overfull blocks are split further
/// by binary search along the curve. Tasks are claimed dynamically; split rows
/// are reduced pairwise in sub-task order, so the result is deterministic for
/// any worker count.
inline void spmv_csb(const CsbMatrix& a, const DenseVector& x, DenseVector& y,
                     unsigned p, std::size_t split_threshold = 0) {
  detail::check_spmv_args(x.size(), a.n, y.size(), a.m, p);
  const std::size_t threshold =
      split_threshold == 0 ? 2 * static_cast<std::size_t>(a.beta.beta)
                           : split_threshold;

  std::vector<detail::CsbWorkItem> items;
  struct SplitRow {
    index_t block_row;
    std::size_t slot_begin;
    std::size_t slot_count;
  };
  std::vector<SplitRow> split_rows;
  std::size_t total_slots = 0;

  for (index_t br = 0; br < a.block_rows; ++br) {
    const std::size_t row_cell = static_cast<std::size_t>(br) * a.block_cols;
    const std::size_t row_begin = a.blk_ptr[row_cell];
    const std::size_t row_end = a.blk_ptr[row_cell + a.block_cols];
    if (row_end == row_begin) continue;
    if (row_end - row_begin <= threshold) {
      items.push_back({br, 0, a.block_cols, row_begin, row_end, -1});
      continue;
    }
    const std::size_t slot_begin = total_slots;
    std::int32_t slot = static_cast<std::int32_t>(total_slots);
    index_t chunk_first = 0;
    std::size_t chunk_count = 0;
    auto flush_chunk = [&](index_t cell_end) {
      if (chunk_count == 0) return;
      items.push_back({br, chunk_first, cell_end,
                       a.blk_ptr[row_cell + chunk_first],
                       a.blk_ptr[row_cell + cell_end], slot++});
      chunk_count = 0;
    };
    for (index_t c = 0; c < a.block_cols; ++c) {
      const std::size_t cell_nnz =
          a.blk_ptr[row_cell + c + 1] - a.blk_ptr[row_cell + c];
      if (cell_nnz > threshold) {
        flush_chunk(c);
        std::vector<std::pair<std::size_t, std::size_t>> leaves;
        detail::split_block_range(a, a.blk_ptr[row_cell + c],
                                  a.blk_ptr[row_cell + c + 1], a.beta.beta, {},
                                  threshold, leaves);
        for (const auto& [lo, hi] : leaves) {
          items.push_back({br, c, c + 1, lo, hi, slot++});
        }
        chunk_first = c + 1;
        continue;
      }
      if (chunk_count == 0) chunk_first = c;
      if (chunk_count + cell_nnz > threshold) {
        flush_chunk(c);
        chunk_first = c;
      }
      chunk_count += cell_nnz;
    }
    flush_chunk(a.block_cols);
    const std::size_t slots = static_cast<std::size_t>(slot) - slot_begin;
    split_rows.push_back({br, slot_begin, slots});
    total_slots += slots;
  }

  const unsigned lb = a.beta.log2_beta;
  std::vector<DenseVector> temps(total_slots);
  for (const auto& row : split_rows) {
    const index_t height =
        std::min<index_t>(a.beta.beta, a.m - (row.block_row << lb));
    for (std::size_t s = 0; s < row.slot_count; ++s) {
      temps[row.slot_begin + s].assign(height, 0.0);
    }
  }

  // Phase 0: the output vector is accumulated into, so clear it first.
  parallel_run(p, [&](unsigned w) {
    const std::size_t lo = chunk_begin(y.size(), p, w);
    const std::size_t hi = chunk_begin(y.size(), p, w + 1);
    std::fill(y.begin() + lo, y.begin() + hi, 0.0);
  });

  auto run_item = [&](const detail::CsbWorkItem& item) {
    value_t* target =
        item.temp_slot < 0 ? y.data() + (item.block_row << lb)
                           : temps[static_cast<std::size_t>(item.temp_slot)].data();
    const std::size_t row_cell =
        static_cast<std::size_t>(item.block_row) * a.block_cols;
    for (index_t c = item.cell_begin; c < item.cell_end; ++c) {
      const std::size_t lo = std::max<std::size_t>(a.blk_ptr[row_cell + c],
                                                   item.elem_begin);
      const std::size_t hi = std::min<std::size_t>(a.blk_ptr[row_cell + c + 1],
                                                   item.elem_end);
      const index_t col_base = c << lb;
      for (std::size_t k = lo; k < hi; ++k) {
        target[packed_row(a.packed[k])] +=
            a.data[k] * x[col_base + packed_col(a.packed[k])];
      }
    }
  };

  std::atomic<std::size_t> next_item{0};
  parallel_run(p, [&](unsigned) {
    for (;;) {
      const std::size_t t = next_item.fetch_add(1, std::memory_order_relaxed);
      if (t >= items.size()) break;
      run_item(items[t]);
    }
  });

  if (!split_rows.empty()) {
    std::atomic<std::size_t> next_row{0};
    parallel_run(p, [&](unsigned) {
      for (;;) {
        const std::size_t t = next_row.fetch_add(1, std::memory_order_relaxed);
        if (t >= split_rows.size()) break;
        const auto& row = split_rows[t];
        for (std::size_t stride = 1; stride < row.slot_count; stride *= 2) {
          for (std::size_t s = 0; s + stride < row.slot_count; s += 2 * stride) {
            auto& dst = temps[row.slot_begin + s];
            const auto& src = temps[row.slot_begin + s + stride];
            for (std::size_t q = 0; q < dst.size(); ++q) dst[q] += src[q];
          }
        }
        value_t* out = y.data() + (row.block_row << lb);
        const auto& total = temps[row.slot_begin];
        for (std::size_t q = 0; q < total.size(); ++q) out[q] += total[q];
      }
    });
  }
}

/// Statically banded BCOH: worker b sweeps band b, writing exclusively to its
/// own y rows; block coordinates come from the block-level replay (BICRS
/// increments or the Hilbert pointer walk).
inline void spmv_bcoh(const BcohMatrix& a, const DenseVector& x, DenseVector& y,
                      unsigned p) {
  detail::check_spmv_args(x.size(), a.n, y.size(), a.m, p);
  require(p == a.bands.size(), ErrorKind::InvalidArgument,
          "matrix was built for " + std::to_string(a.bands.size()) +
              " bands, multiply requested " + std::to_string(p));
  parallel_run(p, [&](unsigned w) {
    const BcohBand& band = a.bands[w];
    std::fill(y.begin() + band.first_row,
              y.begin() + band.first_row + band.row_count, 0.0);
    detail::bcoh_for_each_element(
        a, band,
        [&](index_t row, index_t col, value_t value) { y[row] += value * x[col]; });
  });
}

/// Merge-path over the block-level CRS: consuming a block multiplies it into a
/// per-worker temporary slice; consuming a block-row terminator flushes the
/// slice into y. Carry-outs are (block row, partial slice) pairs.
inline void spmv_mergeb(const MergeBlockMatrix& a, const DenseVector& x,
                        DenseVector& y, unsigned p) {
  detail::check_spmv_args(x.size(), a.n, y.size(), a.m, p);
  const std::size_t blocks = a.block_count();
  const std::size_t total = static_cast<std::size_t>(a.block_rows) + blocks;
  if (total == 0) return;

  const unsigned lb = a.beta.log2_beta;
  const auto bounds = merge_diagonals(total, p);
  std::vector<index_t> carry_row(p, a.block_rows);
  std::vector<DenseVector> carry_slice(p);
  auto row_end = [&](std::size_t i) { return a.blk_row_ptr[i + 1]; };
  auto natural = [&](std::size_t j) { return static_cast<index_t>(j); };

  auto multiply_block = [&](std::size_t t, value_t* slice) {
    const index_t col_base = a.blk_col_ind[t] << lb;
    for (index_t k = a.blk_data_ptr[t]; k < a.blk_data_ptr[t + 1]; ++k) {
      slice[packed_row(a.packed[k])] +=
          a.data[k] * x[col_base + packed_col(a.packed[k])];
    }
  };

  parallel_run(p, [&](unsigned w) {
    auto [i, t] = diagonal_search(a.block_rows, blocks, bounds[w], row_end, natural);
    const auto [i_end, t_end] =
        diagonal_search(a.block_rows, blocks, bounds[w + 1], row_end, natural);
    DenseVector slice(a.beta.beta, 0.0);
    for (; i < i_end; ++i) {
      for (; t < a.blk_row_ptr[i + 1]; ++t) multiply_block(t, slice.data());
      const index_t row_base = static_cast<index_t>(i) << lb;
      const index_t height = std::min<index_t>(a.beta.beta, a.m - row_base);
      for (index_t q = 0; q < height; ++q) {
        y[row_base + q] = slice[q];
        slice[q] = 0.0;
      }
    }
    for (; t < t_end; ++t) multiply_block(t, slice.data());
    carry_row[w] = static_cast<index_t>(i_end);
    carry_slice[w] = std::move(slice);
  });

  for (unsigned w = 0; w < p; ++w) {
    if (carry_row[w] >= a.block_rows) continue;
    const index_t row_base = carry_row[w] << lb;
    const index_t height = std::min<index_t>(a.beta.beta, a.m - row_base);
    for (index_t q = 0; q < height; ++q) y[row_base + q] += carry_slice[w][q];
  }
}

// Allocating wrappers.

inline DenseVector spmv_parcrs(const CrsMatrix& a, const DenseVector& x, unsigned p) {
  DenseVector y(a.m, 0.0);
  spmv_parcrs(a, x, y, p);
  return y;
}

inline DenseVector spmv_merge(const CrsMatrix& a, const DenseVector& x, unsigned p) {
  DenseVector y(a.m, 0.0);
  spmv_merge(a, x, y, p);
  return y;
}

inline DenseVector spmv_csb(const CsbMatrix& a, const DenseVector& x, unsigned p,
                            std::size_t split_threshold = 0) {
  DenseVector y(a.m, 0.0);
  spmv_csb(a, x, y, p, split_threshold);
  return y;
}

inline DenseVector spmv_bcoh(const BcohMatrix& a, const DenseVector& x, unsigned p) {
  DenseVector y(a.m, 0.0);
  spmv_bcoh(a, x, y, p);
  return y;
}

inline DenseVector spmv_mergeb(const MergeBlockMatrix& a, const DenseVector& x,
                               unsigned p) {
  DenseVector y(a.m, 0.0);
  spmv_mergeb(a, x, y, p);
  return y;
}

}  // namespace spmvlab

#endif  // SPMVLAB_SPMV_PARALLEL_HPP
