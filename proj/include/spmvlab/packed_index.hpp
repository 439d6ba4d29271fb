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

#ifndef SPMVLAB_PACKED_INDEX_HPP
#define SPMVLAB_PACKED_INDEX_HPP

#include <cstdint>
#include <utility>

#include "spmvlab/types.hpp"

namespace spmvlab {

/// In-block coordinate pair packed into one 32-bit word: row in the high
/// 16 bits, column in the low 16 bits.
using PackedIndex = std::uint32_t;

inline PackedIndex pack_index(index_t row_in_block, index_t col_in_block) {
  require(row_in_block < (1u << 16) && col_in_block < (1u << 16),
          ErrorKind::Overflow, "in-block coordinate does not fit 16 bits");
  return (static_cast<PackedIndex>(row_in_block) << 16) |
         static_cast<PackedIndex>(col_in_block);
}

inline std::pair<index_t, index_t> unpack_index(PackedIndex packed) {
  return {static_cast<index_t>(packed >> 16),
          static_cast<index_t>(packed & 0xFFFFu)};
}

inline index_t packed_row(PackedIndex packed) { return packed >> 16; }
inline index_t packed_col(PackedIndex packed) { return packed & 0xFFFFu; }

}  // namespace spmvlab

#endif  // SPMVLAB_PACKED_INDEX_HPP
