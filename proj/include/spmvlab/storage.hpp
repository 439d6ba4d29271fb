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

#ifndef SPMVLAB_STORAGE_HPP
#define SPMVLAB_STORAGE_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "spmvlab/bcoh.hpp"
#include "spmvlab/bicrs.hpp"
#include "spmvlab/crs.hpp"
#include "spmvlab/csb.hpp"
#include "spmvlab/mergeb.hpp"
#include "spmvlab/triplet.hpp"

namespace spmvlab {

/// Byte counts of one storage array.
struct StorageArray {
  std::string name;
  std::size_t bytes = 0;
};

/// Per-array byte accounting for one built format.
struct StorageBreakdown {
  std::string format;
  std::vector<StorageArray> arrays;

  std::size_t bytes(const std::string& name) const {
    std::size_t total = 0;
    for (const auto& a : arrays) {
      if (a.name == name) total += a.bytes;
    }
    return total;
  }
  std::size_t total() const {
    std::size_t sum = 0;
    for (const auto& a : arrays) sum += a.bytes;
    return sum;
  }
  std::size_t index_bytes() const { return total() - bytes("data"); }
};

template <typename T>
std::size_t vector_bytes(const std::vector<T>& v) {
  return v.size() * sizeof(T);
}

inline StorageBreakdown storage_report(const TripletMatrix& a) {
  return {"triplet",
          {{"row_ind", vector_bytes(a.row_ind)},
           {"col_ind", vector_bytes(a.col_ind)},
           {"data", vector_bytes(a.data)}}};
}

inline StorageBreakdown storage_report(const CrsMatrix& a) {
  return {"crs",
          {{"row_ptr", vector_bytes(a.row_ptr)},
           {"col_ind", vector_bytes(a.col_ind)},
           {"data", vector_bytes(a.data)}}};
}

template <typename Increment>
StorageBreakdown storage_report(const IncrementalRowStorage<Increment>& a) {
  return {"icrs",
          {{"col_inc", vector_bytes(a.col_inc)},
           {"row_jump", vector_bytes(a.row_jump)},
           {"data", vector_bytes(a.data)}}};
}

inline StorageBreakdown storage_report(const CsbMatrix& a) {
  return {a.curve == CurveKind::ZMorton ? "csb" : "csbh",
          {{"blk_ptr", vector_bytes(a.blk_ptr)},
           {"packed", vector_bytes(a.packed)},
           {"data", vector_bytes(a.data)}}};
}

inline StorageBreakdown storage_report(const MergeBlockMatrix& a) {
  return {a.hilbert_inside ? "mergebh" : "mergeb",
          {{"blk_row_ptr", vector_bytes(a.blk_row_ptr)},
           {"blk_col_ind", vector_bytes(a.blk_col_ind)},
           {"blk_data_ptr", vector_bytes(a.blk_data_ptr)},
           {"packed", vector_bytes(a.packed)},
           {"data", vector_bytes(a.data)}}};
}

inline StorageBreakdown storage_report(const BcohMatrix& a) {
  StorageBreakdown report;
  report.format = a.variant == bcoh_variant     ? "bcoh"
                  : a.variant == bcohc_variant  ? "bcohc"
                  : a.variant == bcohch_variant ? "bcohch"
                                                : "bcohchp";
  StorageArray block_nnz{"block_nnz", 0}, row_jump_block{"row_jump_block", 0},
      col_jump_block{"col_jump_block", 0}, blk_ptr{"blk_ptr", 0},
      col_inc{"col_inc", 0}, row_jump{"row_jump", 0}, packed{"packed", 0},
      data{"data", 0};
  for (const auto& band : a.bands) {
    block_nnz.bytes += vector_bytes(band.block_nnz);
    row_jump_block.bytes += vector_bytes(band.row_jump_block);
    col_jump_block.bytes += vector_bytes(band.col_jump_block);
    blk_ptr.bytes += vector_bytes(band.blk_ptr);
    col_inc.bytes += vector_bytes(band.col_inc);
    row_jump.bytes += vector_bytes(band.row_jump);
    packed.bytes += vector_bytes(band.packed);
    data.bytes += vector_bytes(band.data);
  }
  report.arrays = {block_nnz, row_jump_block, col_jump_block, blk_ptr,
                   col_inc,   row_jump,       packed,         data};
  return report;
}

/// Bytes spent on the block-level structure of a BCOH matrix: the BICRS
/// triple, or the Hilbert-ordered pointer array.
inline std::size_t bcoh_block_level_bytes(const BcohMatrix& a) {
  const auto report = storage_report(a);
  if (a.variant.block_level == BcohBlockLevel::Bicrs) {
    return report.bytes("block_nnz") + report.bytes("row_jump_block") +
           report.bytes("col_jump_block");
  }
  return report.bytes("blk_ptr");
}

}  // namespace spmvlab

#endif  // SPMVLAB_STORAGE_HPP
