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

#ifndef SPMVLAB_IO_HPP
#define SPMVLAB_IO_HPP

#include <filesystem>
#include <fstream>
#include <string>

#include "spmvlab/cache_io.hpp"
#include "spmvlab/matrix_market.hpp"

namespace spmvlab {

/// Loads a matrix from disk, sniffing the binary-cache magic to decide
/// between the cache format and Matrix Market text.
inline TripletMatrix load_matrix(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.is_open(), ErrorKind::IoError, "cannot open " + path.string());
  std::array<char, 8> head{};
  in.read(head.data(), head.size());
  const bool is_cache =
      in.gcount() == static_cast<std::streamsize>(head.size()) && head == cache_magic;
  in.clear();
  in.seekg(0);
  if (is_cache) return cache_read(in);
  return read_matrix_market(in);
}

inline void save_cache(const TripletMatrix& a, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  require(out.is_open(), ErrorKind::IoError, "cannot open " + path.string());
  cache_write(a, out);
}

}  // namespace spmvlab

#endif  // SPMVLAB_IO_HPP
