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

#ifndef SPMVLAB_BCOH_HPP
#define SPMVLAB_BCOH_HPP

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "spmvlab/block_size.hpp"
#include "spmvlab/curves.hpp"
#include "spmvlab/packed_index.hpp"
#include "spmvlab/parallel.hpp"
#include "spmvlab/triplet.hpp"
#include "spmvlab/types.hpp"

namespace spmvlab {

enum class BcohInBlock { Icrs, Packed };
enum class BcohInBlockOrder { RowWise, Hilbert };
enum class BcohBlockLevel { Bicrs, HilbertPtr };

/// The three storage choices that distinguish BCOH, BCOHC, BCOHCH, BCOHCHP.
struct BcohVariant {
  BcohInBlock in_block = BcohInBlock::Icrs;
  BcohInBlockOrder order = BcohInBlockOrder::RowWise;
  BcohBlockLevel block_level = BcohBlockLevel::Bicrs;

  bool operator==(const BcohVariant&) const = default;
};

inline constexpr BcohVariant bcoh_variant{BcohInBlock::Icrs, BcohInBlockOrder::RowWise,
                                          BcohBlockLevel::Bicrs};
inline constexpr BcohVariant bcohc_variant{BcohInBlock::Packed,
                                           BcohInBlockOrder::RowWise,
                                           BcohBlockLevel::Bicrs};
inline constexpr BcohVariant bcohch_variant{BcohInBlock::Packed,
                                            BcohInBlockOrder::Hilbert,
                                            BcohBlockLevel::Bicrs};
inline constexpr BcohVariant bcohchp_variant{BcohInBlock::Packed,
                                             BcohInBlockOrder::Hilbert,
                                             BcohBlockLevel::HilbertPtr};

inline constexpr unsigned bcoh_index_bits_cap = 15;

/// One thread's row band. Blocks are visited in Hilbert order of their block
/// coordinates, stored either as compressed BICRS increments (block_nnz,
/// row/col jumps) or as a pointer array over the band's cells enumerated along
/// the Hilbert curve of the covering power-of-two grid. In-block storage is
/// compressed ICRS (col_inc indexed by the element position, one row_jump per
/// nonempty in-block row) or packed triplets.
struct BcohBand {
  index_t first_row = 0;
  index_t row_count = 0;
  index_t first_block_row = 0;
  index_t block_row_count = 0;

  std::vector<std::uint32_t> block_nnz;       // BICRS level: nonzeros per block
  std::vector<std::int16_t> row_jump_block;   // BICRS level
  std::vector<std::int16_t> col_jump_block;   // BICRS level
  std::vector<std::uint32_t> blk_ptr;         // pointer level: band cells + 1

  std::vector<std::uint16_t> col_inc;   // ICRS in-block
  std::vector<std::uint16_t> row_jump;  // ICRS in-block
  std::vector<PackedIndex> packed;      // packed in-block
  std::vector<value_t> data;

  index_t nnz() const { return static_cast<index_t>(data.size()); }
  index_t block_count() const {
    return static_cast<index_t>(col_jump_block.size());
  }
};

struct BcohMatrix {
  index_t m = 0;
  index_t n = 0;
  BlockSize beta;
  BcohVariant variant;
  index_t block_rows = 0;
  index_t block_cols = 0;
  unsigned element_level = 0;  // Hilbert level covering max(m, n) and beta
  unsigned block_level = 0;    // element_level - log2(beta)
  std::vector<BcohBand> bands;

  index_t nnz() const {
    index_t total = 0;
    for (const auto& band : bands) total += band.nnz();
    return total;
  }
};

namespace detail {

inline std::uint16_t as_u16(std::int16_t bits) {
  return static_cast<std::uint16_t>(bits);
}

/// Visits every block of a band in storage order:
/// fn(block_row, block_col, elem_begin, elem_count).
template <typename Fn>
void bcoh_for_each_block(const BcohMatrix& a, const BcohBand& band, Fn&& fn) {
  if (a.variant.block_level == BcohBlockLevel::Bicrs) {
    std::uint32_t col = 0;
    std::int32_t local_row = 0;
    std::size_t rj = 0;
    std::size_t begin = 0;
    for (std::size_t t = 0; t < band.col_jump_block.size(); ++t) {
      if (t == 0) {
        col = static_cast<std::uint32_t>(band.col_jump_block[0]);
        local_row = band.row_jump_block[0];
        rj = 1;
      } else {
        // 16-bit modular add; a result landing in [block_cols, 2*block_cols)
        // signals a block-row change. Unambiguous because the grid dimensions
        // are below 2^15.
        const std::uint16_t raw = static_cast<std::uint16_t>(
            static_cast<std::uint16_t>(col) + as_u16(band.col_jump_block[t]));
        if (raw >= a.block_cols) {
          col = raw - static_cast<std::uint32_t>(a.block_cols);
          local_row += band.row_jump_block[rj++];
        } else {
          col = raw;
        }
      }
      const std::size_t count = band.block_nnz[t];
      fn(band.first_block_row + static_cast<index_t>(local_row),
         static_cast<index_t>(col), begin, count);
      begin += count;
    }
  } else {
    std::size_t cell = 0;
    hilbert_rect_walk(a.block_level, band.first_block_row,
                      band.first_block_row + band.block_row_count, index_t{0},
                      a.block_cols, [&](index_t br, index_t bc) {
                        const std::size_t begin = band.blk_ptr[cell];
                        const std::size_t end = band.blk_ptr[cell + 1];
                        ++cell;
                        if (end > begin) fn(br, bc, begin, end - begin);
                      });
  }
}

/// Visits every element of a band in storage order: fn(row, col, value).
template <typename Fn>
void bcoh_for_each_element(const BcohMatrix& a, const BcohBand& band, Fn&& fn) {
  const unsigned lb = a.beta.log2_beta;
  const index_t beta = a.beta.beta;
  std::size_t rj = 0;  // ICRS row-jump cursor, shared across the band's blocks
  bcoh_for_each_block(
      a, band, [&](index_t br, index_t bc, std::size_t begin, std::size_t count) {
        const index_t row_base = br << lb;
        const index_t col_base = bc << lb;
        if (a.variant.in_block == BcohInBlock::Packed) {
          for (std::size_t k = begin; k < begin + count; ++k) {
            fn(row_base + packed_row(band.packed[k]),
               col_base + packed_col(band.packed[k]), band.data[k]);
          }
        } else {
          std::uint32_t in_col = band.col_inc[begin];
          std::uint32_t in_row = band.row_jump[rj++];
          fn(row_base + in_row, col_base + in_col, band.data[begin]);
          for (std::size_t k = begin + 1; k < begin + count; ++k) {
            in_col += band.col_inc[k];
            if (in_col >= beta) {
              in_col -= static_cast<std::uint32_t>(beta);
              in_row += band.row_jump[rj++];
            }
            fn(row_base + in_row, col_base + in_col, band.data[k]);
          }
        }
      });
}

}  // namespace detail

/// Two-step conversion: per-band sort (Hilbert over blocks, then the in-block
/// order) followed by band population. The band structure is baked in, so the
/// multiply must run with exactly p workers.
inline BcohMatrix build_bcoh(const TripletMatrix& a, const BlockSize& beta, unsigned p,
                             BcohVariant variant, unsigned threads = 1) {
  require(a.m <= max_dimension && a.n <= max_dimension, ErrorKind::Overflow,
          "matrix dimension exceeds the supported index width");
  require(beta.beta >= 2 && beta.beta <= (index_t{1} << bcoh_index_bits_cap),
          ErrorKind::InvalidArgument, "block size outside the 15-bit increment cap");
  require(variant == bcoh_variant || variant == bcohc_variant ||
              variant == bcohch_variant || variant == bcohchp_variant,
          ErrorKind::InvalidArgument, "unknown BCOH variant tuple");
  require(p >= 1, ErrorKind::InvalidArgument, "band count must be >= 1");

  BcohMatrix out;
  out.m = a.m;
  out.n = a.n;
  out.beta = beta;
  out.variant = variant;
  out.block_rows = blocks_covering(a.m, beta);
  out.block_cols = blocks_covering(a.n, beta);
  out.element_level = std::max(covering_level(a.m, a.n), beta.log2_beta);
  out.block_level = out.element_level - beta.log2_beta;

  const auto prefix = row_prefix(a);
  const auto bounds = partition_rows_by_nnz(prefix, p, beta);

  require(out.block_cols < (index_t{1} << 15), ErrorKind::Overflow,
          "band block grid has " + std::to_string(out.block_cols) +
              " columns; 16-bit block increments require < 2^15");

  const unsigned lb = beta.log2_beta;
  const index_t mask = beta.beta - 1;
  const unsigned block_level = out.block_level;
  const unsigned element_level = out.element_level;

  auto band_of = [&](index_t row) {
    const auto it = std::upper_bound(bounds.begin(), bounds.end(), row);
    return static_cast<unsigned>(it - bounds.begin()) - 1;
  };

  const index_t nnz = a.nnz();
  std::vector<index_t> perm(nnz);
  std::iota(perm.begin(), perm.end(), index_t{0});
  const bool hilbert_elements = variant.order == BcohInBlockOrder::Hilbert;
  parallel_chunk_sort(perm.begin(), perm.end(), threads, [&](index_t l, index_t r) {
    const unsigned bl = band_of(a.row_ind[l]), br = band_of(a.row_ind[r]);
    if (bl != br) return bl < br;
    if (hilbert_elements) {
      return hilbert_encode(a.row_ind[l], a.col_ind[l], element_level).value <
             hilbert_encode(a.row_ind[r], a.col_ind[r], element_level).value;
    }
    const std::uint64_t kl =
        hilbert_encode(a.row_ind[l] >> lb, a.col_ind[l] >> lb, block_level).value;
    const std::uint64_t kr =
        hilbert_encode(a.row_ind[r] >> lb, a.col_ind[r] >> lb, block_level).value;
    if (kl != kr) return kl < kr;
    if ((a.row_ind[l] & mask) != (a.row_ind[r] & mask)) {
      return (a.row_ind[l] & mask) < (a.row_ind[r] & mask);
    }
    return (a.col_ind[l] & mask) < (a.col_ind[r] & mask);
  });

  // Band boundaries inside the sorted permutation.
  std::vector<std::size_t> band_begin(p + 1, nnz);
  band_begin[0] = 0;
  for (std::size_t k = 0, b = 0; k < nnz; ++k) {
    const unsigned band = band_of(a.row_ind[perm[k]]);
    while (b < band) band_begin[++b] = k;
  }

  out.bands.resize(p);
  for (unsigned b = 0; b < p; ++b) {
    BcohBand& band = out.bands[b];
    band.first_row = bounds[b];
    band.row_count = bounds[b + 1] - bounds[b];
    band.first_block_row = bounds[b] >> lb;
    band.block_row_count =
        band.row_count == 0 ? 0 : blocks_covering(bounds[b + 1], beta) -
                                      band.first_block_row;
    require(band.block_row_count < (index_t{1} << 15), ErrorKind::Overflow,
            "band block grid has too many rows for 16-bit block increments");
  }

  auto populate_band = [&](unsigned b) {
    BcohBand& band = out.bands[b];
    const std::size_t lo = band_begin[b];
    const std::size_t hi = b + 1 <= p ? band_begin[b + 1] : nnz;
    band.data.reserve(hi - lo);

    struct BlockRef {
      index_t row, col;
      std::uint32_t count;
    };
    std::vector<BlockRef> blocks;

    index_t prev_in_row = 0;
    index_t prev_in_col = 0;
    for (std::size_t k = lo; k < hi; ++k) {
      const index_t id = perm[k];
      const index_t row = a.row_ind[id];
      const index_t col = a.col_ind[id];
      const index_t br = row >> lb;
      const index_t bc = col >> lb;
      const index_t in_row = row & mask;
      const index_t in_col = col & mask;
      const bool new_block = blocks.empty() || blocks.back().row != br ||
                             blocks.back().col != bc;
      if (new_block) blocks.push_back({br, bc, 0});
      ++blocks.back().count;

      if (variant.in_block == BcohInBlock::Packed) {
        band.packed.push_back(pack_index(in_row, in_col));
      } else {
        if (new_block) {
          band.col_inc.push_back(static_cast<std::uint16_t>(in_col));
          band.row_jump.push_back(static_cast<std::uint16_t>(in_row));
        } else if (in_row == prev_in_row) {
          band.col_inc.push_back(static_cast<std::uint16_t>(in_col - prev_in_col));
        } else {
          band.col_inc.push_back(
              static_cast<std::uint16_t>(in_col - prev_in_col + beta.beta));
          band.row_jump.push_back(static_cast<std::uint16_t>(in_row - prev_in_row));
        }
        prev_in_row = in_row;
        prev_in_col = in_col;
      }
      band.data.push_back(a.data[id]);
    }

    if (variant.block_level == BcohBlockLevel::Bicrs) {
      band.block_nnz.reserve(blocks.size());
      band.col_jump_block.reserve(blocks.size());
      index_t prev_br = 0;
      index_t prev_bc = 0;
      for (std::size_t t = 0; t < blocks.size(); ++t) {
        const auto& blk = blocks[t];
        band.block_nnz.push_back(blk.count);
        if (t == 0) {
          band.col_jump_block.push_back(static_cast<std::int16_t>(blk.col));
          band.row_jump_block.push_back(
              static_cast<std::int16_t>(blk.row - band.first_block_row));
        } else if (blk.row == prev_br) {
          band.col_jump_block.push_back(static_cast<std::int16_t>(
              static_cast<std::int64_t>(blk.col) - prev_bc));
        } else {
          const auto raw = static_cast<std::uint16_t>(
              static_cast<std::int64_t>(blk.col) - prev_bc + out.block_cols);
          band.col_jump_block.push_back(std::bit_cast<std::int16_t>(raw));
          band.row_jump_block.push_back(static_cast<std::int16_t>(
              static_cast<std::int64_t>(blk.row) - prev_br));
        }
        prev_br = blk.row;
        prev_bc = blk.col;
      }
    } else {
      const std::size_t cells =
          static_cast<std::size_t>(band.block_row_count) * out.block_cols;
      band.blk_ptr.reserve(cells + 1);
      band.blk_ptr.push_back(0);
      std::size_t t = 0;
      std::uint32_t cum = 0;
      hilbert_rect_walk(block_level, band.first_block_row,
                        band.first_block_row + band.block_row_count, index_t{0},
                        out.block_cols, [&](index_t br, index_t bc) {
                          if (t < blocks.size() && blocks[t].row == br &&
                              blocks[t].col == bc) {
                            cum += blocks[t].count;
                            ++t;
                          }
                          band.blk_ptr.push_back(cum);
                        });
      require(t == blocks.size(), ErrorKind::CorruptFormat,
              "Hilbert cell walk missed a populated block");
    }
  };

  if (threads <= 1 || p == 1) {
    for (unsigned b = 0; b < p; ++b) populate_band(b);
  } else {
    parallel_run(std::min(threads, p), [&](unsigned w) {
      for (unsigned b = w; b < p; b += std::min(threads, p)) populate_band(b);
    });
  }
  return out;
}

/// Reconstructs the triplet form; entries appear band by band in storage order.
inline TripletMatrix bcoh_to_triplet(const BcohMatrix& a) {
  TripletMatrix out;
  out.m = a.m;
  out.n = a.n;
  for (const auto& band : a.bands) {
    detail::bcoh_for_each_element(a, band,
                                  [&](index_t row, index_t col, value_t value) {
                                    out.row_ind.push_back(row);
                                    out.col_ind.push_back(col);
                                    out.data.push_back(value);
                                  });
  }
  return out;
}

}  // namespace spmvlab

#endif  // SPMVLAB_BCOH_HPP
