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

#ifndef SPMVLAB_BLOCK_SIZE_HPP
#define SPMVLAB_BLOCK_SIZE_HPP

#include <algorithm>
#include <bit>
#include <cstdint>
#include <span>
#include <vector>

#include "spmvlab/types.hpp"

namespace spmvlab {

/// Power-of-two side length of the square sparse blocks.
struct BlockSize {
  index_t beta = 0;
  unsigned log2_beta = 0;

  bool operator==(const BlockSize&) const = default;
};

inline BlockSize make_block_size(unsigned log2_beta) {
  return {static_cast<index_t>(index_t{1} << log2_beta), log2_beta};
}

/// Default cache budget for the x/y windows of one block multiplication.
inline constexpr std::uint64_t default_l2_bytes = 512 * 1024;

/// Picks the block side: start log2(beta) at 3 + ceil(log2(sqrt(n))) and lower
/// it until beta fits the index-compression cap (2^index_bits_cap) and the x/y
/// windows fit half the L2 budget (2 * beta * value_size <= l2_bytes / 2).
/// Never lowered past beta = 2.
inline BlockSize select_block_size(std::uint64_t n, unsigned index_bits_cap,
                                   std::uint64_t l2_bytes = default_l2_bytes,
                                   std::uint64_t value_size = sizeof(value_t)) {
  require(n >= 1, ErrorKind::InvalidArgument, "dimension must be positive");
  // ceil(log2(sqrt(n))) == ceil(ceil(log2(n)) / 2)
  const unsigned ceil_log2_n =
      n <= 1 ? 0 : static_cast<unsigned>(std::bit_width(n - 1));
  unsigned log2_beta = 3 + (ceil_log2_n + 1) / 2;
  auto fits = [&](unsigned lb) {
    const std::uint64_t beta = std::uint64_t{1} << lb;
    return lb <= index_bits_cap && 2 * beta * value_size <= l2_bytes / 2;
  };
  while (log2_beta > 1 && !fits(log2_beta)) --log2_beta;
  return make_block_size(log2_beta);
}

/// Number of block rows/cols covering an extent.
inline index_t blocks_covering(index_t extent, const BlockSize& beta) {
  return (extent + beta.beta - 1) >> beta.log2_beta;
}

/// Static per-thread row bands for the row-distributed formats. Boundaries are
/// multiples of beta (the final bound is m itself); each cut targets k*nnz/p
/// via the greedy prefix-sum cut, rounded to the nearest block-row boundary.
/// When there are at least p block rows every band receives at least one;
/// otherwise trailing bands may be empty.
inline std::vector<index_t> partition_rows_by_nnz(std::span<const index_t> row_nnz_prefix,
                                                  unsigned p, const BlockSize& beta) {
  require(p >= 1, ErrorKind::InvalidArgument, "thread count must be >= 1");
  require(!row_nnz_prefix.empty(), ErrorKind::InvalidArgument,
          "prefix array must have m + 1 entries");
  const index_t m = static_cast<index_t>(row_nnz_prefix.size() - 1);
  const std::uint64_t nnz = row_nnz_prefix[m];
  const index_t block_rows = blocks_covering(m, beta);

  std::vector<index_t> bounds(p + 1, m);
  bounds[0] = 0;
  index_t prev_cut = 0;  // in block-row units
  for (unsigned k = 1; k < p; ++k) {
    // Smallest row r with prefix[r] * p >= k * nnz.
    const std::uint64_t target = nnz * k;
    auto it = std::lower_bound(row_nnz_prefix.begin(), row_nnz_prefix.end(), target,
                               [&](index_t value, std::uint64_t t) {
                                 return static_cast<std::uint64_t>(value) * p < t;
                               });
    const index_t greedy_row = static_cast<index_t>(it - row_nnz_prefix.begin());
    index_t cut = (greedy_row + beta.beta / 2) >> beta.log2_beta;
    // Every band keeps at least one block row while block rows remain; when p
    // exceeds the block rows, the trailing bands end up empty.
    const index_t hi = block_rows >= p ? block_rows - (p - k) : block_rows;
    cut = std::clamp<index_t>(cut, std::min<index_t>(prev_cut + 1, hi), hi);
    bounds[k] = std::min<index_t>(cut << beta.log2_beta, m);
    prev_cut = cut;
  }
  return bounds;
}

}  // namespace spmvlab

#endif  // SPMVLAB_BLOCK_SIZE_HPP
