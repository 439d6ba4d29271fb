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

#ifndef SPMVLAB_CACHE_IO_HPP
#define SPMVLAB_CACHE_IO_HPP

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>

#include "spmvlab/triplet.hpp"
#include "spmvlab/types.hpp"

namespace spmvlab {

/// Binary triplet cache: Matrix Market parsing dominates ingest for large
/// matrices, so parsed inputs can be persisted bit-exactly. Layout: the tag
/// "SPMVLAB1" (the trailing digit is the version), then m, n, nnz as 64-bit
/// little-endian, then the row index, column index and value streams, each
/// entry 64 bits little-endian (values as IEEE-754 bit patterns).
inline constexpr std::array<char, 8> cache_magic = {'S', 'P', 'M', 'V',
                                                    'L', 'A', 'B', '1'};

namespace detail {

inline void put_u64_le(std::ostream& out, std::uint64_t value) {
  std::array<unsigned char, 8> bytes;
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<unsigned char>(value >> (8 * i));
  out.write(reinterpret_cast<const char*>(bytes.data()), 8);
}

inline std::uint64_t get_u64_le(std::istream& in) {
  std::array<unsigned char, 8> bytes;
  in.read(reinterpret_cast<char*>(bytes.data()), 8);
  require(in.gcount() == 8, ErrorKind::Truncated, "cache stream ended early");
  std::uint64_t value = 0;
  for (int i = 0; i < 8; ++i) value |= std::uint64_t{bytes[i]} << (8 * i);
  return value;
}

}  // namespace detail

inline void cache_write(const TripletMatrix& a, std::ostream& out) {
  out.write(cache_magic.data(), cache_magic.size());
  detail::put_u64_le(out, a.m);
  detail::put_u64_le(out, a.n);
  detail::put_u64_le(out, a.nnz());
  for (index_t r : a.row_ind) detail::put_u64_le(out, r);
  for (index_t c : a.col_ind) detail::put_u64_le(out, c);
  for (value_t v : a.data) detail::put_u64_le(out, std::bit_cast<std::uint64_t>(v));
  require(static_cast<bool>(out), ErrorKind::IoError, "cache write failed");
}

inline TripletMatrix cache_read(std::istream& in) {
  std::array<char, 8> magic;
  in.read(magic.data(), magic.size());
  require(in.gcount() == static_cast<std::streamsize>(magic.size()) &&
              magic == cache_magic,
          ErrorKind::BadMagic, "not a spmvlab cache file");
  TripletMatrix out;
  const std::uint64_t m = detail::get_u64_le(in);
  const std::uint64_t n = detail::get_u64_le(in);
  const std::uint64_t nnz = detail::get_u64_le(in);
  require(m <= max_dimension && n <= max_dimension, ErrorKind::Overflow,
          "matrix dimension exceeds the supported index width");
  out.m = static_cast<index_t>(m);
  out.n = static_cast<index_t>(n);
  out.row_ind.resize(nnz);
  out.col_ind.resize(nnz);
  out.data.resize(nnz);
  for (auto& r : out.row_ind) r = static_cast<index_t>(detail::get_u64_le(in));
  for (auto& c : out.col_ind) c = static_cast<index_t>(detail::get_u64_le(in));
  for (auto& v : out.data) v = std::bit_cast<value_t>(detail::get_u64_le(in));
  validate(out);
  return out;
}

}  // namespace spmvlab

#endif  // SPMVLAB_CACHE_IO_HPP
