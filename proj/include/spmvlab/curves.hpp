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

#ifndef SPMVLAB_CURVES_HPP
#define SPMVLAB_CURVES_HPP

#include <algorithm>
#include <array>
#include <bit>
#include <cassert>
#include <cstdint>
#include <span>
#include <string>
#include <utility>

#include "spmvlab/packed_index.hpp"
#include "spmvlab/types.hpp"

namespace spmvlab {

enum class CurveKind { ZMorton, Hilbert };

/// Rank of a cell along a space-filling curve over a 2^level x 2^level grid.
struct CurveIndex {
  std::uint64_t value = 0;
  unsigned level = 0;
};

/// Highest supported recursion depth; keeps ranks inside 64 bits.
inline constexpr unsigned max_curve_level = 31;

namespace detail {

inline void check_grid(index_t row, index_t col, unsigned level) {
  require(level <= max_curve_level, ErrorKind::InvalidArgument,
          "curve level " + std::to_string(level) + " exceeds " +
              std::to_string(max_curve_level));
  const std::uint64_t side = std::uint64_t{1} << level;
  require(row < side && col < side, ErrorKind::IndexOutOfRange,
          "cell outside the 2^level grid");
}

}  // namespace detail

/// Orientation of the Hilbert curve at one recursion level. The base
/// orientation visits the quadrants top-left, bottom-left, bottom-right,
/// top-right; children are derived by the usual swap/flip rules. Both flags
/// are involutions and commute, so states form a four-element group.
struct HilbertOrientation {
  bool swapped = false;
  bool flipped = false;

  /// Curve position (0..3) of the quadrant holding the given coordinate bits.
  unsigned position(unsigned row_bit, unsigned col_bit) const {
    unsigned x = col_bit;
    unsigned y = row_bit;
    if (flipped) {
      x ^= 1u;
      y ^= 1u;
    }
    if (swapped) std::swap(x, y);
    return (3u * x) ^ y;
  }

  /// Inverse of position(): coordinate bits (row, col) of curve position pos.
  std::pair<unsigned, unsigned> cell(unsigned pos) const {
    static constexpr unsigned rx[4] = {0u, 0u, 1u, 1u};
    static constexpr unsigned ry[4] = {0u, 1u, 1u, 0u};
    unsigned x = rx[pos];
    unsigned y = ry[pos];
    if (flipped) {
      x ^= 1u;
      y ^= 1u;
    }
    if (swapped) std::swap(x, y);
    return {y, x};  // (row_bit, col_bit)
  }

  /// Orientation used inside the quadrant at curve position pos.
  HilbertOrientation child(unsigned pos) const {
    HilbertOrientation next = *this;
    if (pos == 0) {
      next.swapped = !next.swapped;
    } else if (pos == 3) {
      next.swapped = !next.swapped;
      next.flipped = !next.flipped;
    }
    return next;
  }

  bool operator==(const HilbertOrientation&) const = default;
};

/// Bit-interleaved rank: quadrants visited top-left, top-right, bottom-left,
/// bottom-right at every level (row bit above the column bit).
inline CurveIndex morton_encode(index_t row, index_t col, unsigned level) {
  detail::check_grid(row, col, level);
  std::uint64_t value = 0;
  for (unsigned b = level; b-- > 0;) {
    const std::uint64_t rbit = (row >> b) & 1u;
    const std::uint64_t cbit = (col >> b) & 1u;
    value = (value << 2) | (rbit << 1) | cbit;
  }
  return {value, level};
}

inline std::pair<index_t, index_t> morton_decode(CurveIndex idx) {
  require(idx.level <= max_curve_level, ErrorKind::InvalidArgument,
          "curve level exceeds the supported maximum");
  require(idx.value < (std::uint64_t{1} << (2 * idx.level)) || idx.level == 0,
          ErrorKind::IndexOutOfRange, "curve rank outside the grid");
  index_t row = 0;
  index_t col = 0;
  for (unsigned b = 0; b < idx.level; ++b) {
    col |= static_cast<index_t>((idx.value >> (2 * b)) & 1u) << b;
    row |= static_cast<index_t>((idx.value >> (2 * b + 1)) & 1u) << b;
  }
  return {row, col};
}

/// Hilbert rank with the base orientation of HilbertOrientation{}.
inline CurveIndex hilbert_encode(index_t row, index_t col, unsigned level) {
  detail::check_grid(row, col, level);
  HilbertOrientation state;
  std::uint64_t value = 0;
  for (unsigned b = level; b-- > 0;) {
    const unsigned pos = state.position((row >> b) & 1u, (col >> b) & 1u);
    value = (value << 2) | pos;
    state = state.child(pos);
  }
  return {value, level};
}

inline std::pair<index_t, index_t> hilbert_decode(CurveIndex idx) {
  require(idx.level <= max_curve_level, ErrorKind::InvalidArgument,
          "curve level exceeds the supported maximum");
  require(idx.value < (std::uint64_t{1} << (2 * idx.level)) || idx.level == 0,
          ErrorKind::IndexOutOfRange, "curve rank outside the grid");
  HilbertOrientation state;
  index_t row = 0;
  index_t col = 0;
  for (unsigned b = idx.level; b-- > 0;) {
    const unsigned pos = (idx.value >> (2 * b)) & 3u;
    const auto [rbit, cbit] = state.cell(pos);
    row |= static_cast<index_t>(rbit) << b;
    col |= static_cast<index_t>(cbit) << b;
    state = state.child(pos);
  }
  return {row, col};
}

/// Smallest level whose grid covers both extents.
inline unsigned covering_level(index_t rows, index_t cols) {
  const index_t extent = std::max<index_t>({rows, cols, 1});
  const unsigned level = static_cast<unsigned>(std::bit_width(
      static_cast<std::uint64_t>(extent) - 1));
  require(level <= max_curve_level, ErrorKind::Overflow,
          "grid too large for 64-bit curve keys");
  return level;
}

/// Curve rank of an in-block coordinate pair, used as a sort key.
inline std::uint64_t curve_rank(CurveKind curve, index_t row, index_t col,
                                unsigned level) {
  return curve == CurveKind::ZMorton ? morton_encode(row, col, level).value
                                     : hilbert_encode(row, col, level).value;
}

/// Splits a curve-sorted run of packed in-block indices into its four
/// quadrants. `dim` is the side of the current sub-block (a power of two);
/// the returned offsets delimit curve positions 1, 2 and 3. For the Hilbert
/// curve the caller threads the orientation through the recursion; pass the
/// default orientation at the top of a block.
inline std::array<std::size_t, 3> quadrant_boundaries(
    std::span<const PackedIndex> packed, index_t dim, CurveKind curve,
    HilbertOrientation orientation = {}) {
  require(dim >= 2 && std::has_single_bit(static_cast<std::uint64_t>(dim)),
          ErrorKind::InvalidArgument, "sub-block side must be a power of two >= 2");
  const index_t half = dim >> 1;
  auto position = [&](PackedIndex p) -> unsigned {
    const unsigned rbit = (packed_row(p) & half) ? 1u : 0u;
    const unsigned cbit = (packed_col(p) & half) ? 1u : 0u;
    return curve == CurveKind::ZMorton ? (rbit << 1) | cbit
                                       : orientation.position(rbit, cbit);
  };
#ifndef NDEBUG
  assert(std::is_sorted(packed.begin(), packed.end(),
                        [&](PackedIndex a, PackedIndex b) {
                          return position(a) < position(b);
                        }) &&
         "quadrant_boundaries expects curve-sorted input");
#endif
  std::array<std::size_t, 3> offsets{};
  for (unsigned q = 1; q <= 3; ++q) {
    auto it = std::partition_point(packed.begin(), packed.end(),
                                   [&](PackedIndex p) { return position(p) < q; });
    offsets[q - 1] = static_cast<std::size_t>(it - packed.begin());
  }
  return offsets;
}

/// Child orientation entering quadrant q of a Z-Morton split (identity) or a
/// Hilbert split.
inline HilbertOrientation quadrant_child(CurveKind curve,
                                         HilbertOrientation orientation,
                                         unsigned pos) {
  return curve == CurveKind::ZMorton ? orientation : orientation.child(pos);
}

/// Visits every cell of [row0, row1) x [col0, col1) in Hilbert order of the
/// covering 2^level grid, pruning quadrants that miss the rectangle. Used for
/// pointer-array block storage, where block coordinates are recovered from
/// the curve rather than stored.
template <typename Fn>
void hilbert_rect_walk(unsigned level, index_t row0, index_t row1, index_t col0,
                       index_t col1, Fn&& fn) {
  require(level <= max_curve_level, ErrorKind::InvalidArgument,
          "curve level exceeds the supported maximum");
  struct Frame {
    index_t row_base, col_base;
    index_t dim;
    HilbertOrientation state;
  };
  auto walk = [&](auto&& self, const Frame& f) -> void {
    if (f.row_base >= row1 || f.col_base >= col1 || f.row_base + f.dim <= row0 ||
        f.col_base + f.dim <= col0) {
      return;
    }
    if (f.dim == 1) {
      fn(f.row_base, f.col_base);
      return;
    }
    const index_t half = f.dim >> 1;
    for (unsigned pos = 0; pos < 4; ++pos) {
      const auto [rbit, cbit] = f.state.cell(pos);
      self(self, Frame{f.row_base + rbit * half, f.col_base + cbit * half, half,
                       f.state.child(pos)});
    }
  };
  if (row0 >= row1 || col0 >= col1) return;
  walk(walk, Frame{0, 0, static_cast<index_t>(index_t{1} << level),
                   HilbertOrientation{}});
}

}  // namespace spmvlab

#endif  // SPMVLAB_CURVES_HPP
