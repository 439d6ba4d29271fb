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

#ifndef SPMVLAB_MATRIX_MARKET_HPP
#define SPMVLAB_MATRIX_MARKET_HPP

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "spmvlab/triplet.hpp"
#include "spmvlab/types.hpp"

namespace spmvlab {

enum class MmSymmetry { General, Symmetric };
enum class MmField { Real, Integer, Pattern };

/// Parsed Matrix Market banner plus the declared entry count (pre-expansion).
struct MatrixHeader {
  MmSymmetry symmetry = MmSymmetry::General;
  MmField field = MmField::Real;
  index_t m = 0;
  index_t n = 0;
  index_t declared_nnz = 0;
};

namespace detail {

inline std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

inline bool next_content_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos) continue;  // blank
    if (line[first] == '%') continue;          // comment
    return true;
  }
  return false;
}

inline std::uint64_t parse_u64(const std::string& token, std::size_t line_no) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  require(ec == std::errc{} && ptr == token.data() + token.size(),
          ErrorKind::ParseError,
          "line " + std::to_string(line_no) + ": expected an integer, got '" +
              token + "'");
  return value;
}

inline double parse_value(const std::string& token, std::size_t line_no) {
  char* end = nullptr;
  const double value = std::strtod(token.c_str(), &end);
  require(end == token.c_str() + token.size() && !token.empty(),
          ErrorKind::ParseError,
          "line " + std::to_string(line_no) + ": expected a number, got '" +
              token + "'");
  return value;
}

inline std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::istringstream stream(line);
  std::string token;
  while (stream >> token) fields.push_back(token);
  return fields;
}

}  // namespace detail

/// Parses a coordinate-format Matrix Market stream into a triplet matrix:
/// 1-based indices become 0-based, symmetric inputs are expanded by mirroring
/// the off-diagonal entries, pattern entries get the value 1.0 and integer
/// values are widened to floating point. Duplicate coordinates are rejected.
inline TripletMatrix read_matrix_market(std::istream& in,
                                        MatrixHeader* header_out = nullptr) {
  std::string line;
  require(static_cast<bool>(std::getline(in, line)), ErrorKind::BadHeader,
          "empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  auto banner = detail::split_fields(detail::lower(line));
  require(banner.size() == 5 && banner[0] == "%%matrixmarket",
          ErrorKind::BadHeader, "first line must be a %%MatrixMarket banner");
  require(banner[1] == "matrix", ErrorKind::BadHeader,
          "unsupported object '" + banner[1] + "'");
  require(banner[2] != "array", ErrorKind::UnsupportedFormat,
          "dense 'array' bodies are not supported");
  require(banner[2] == "coordinate", ErrorKind::BadHeader,
          "unknown format '" + banner[2] + "'");

  MatrixHeader header;
  if (banner[3] == "real") {
    header.field = MmField::Real;
  } else if (banner[3] == "integer") {
    header.field = MmField::Integer;
  } else if (banner[3] == "pattern") {
    header.field = MmField::Pattern;
  } else {
    fail(ErrorKind::UnsupportedField, "unsupported field '" + banner[3] + "'");
  }
  if (banner[4] == "general") {
    header.symmetry = MmSymmetry::General;
  } else if (banner[4] == "symmetric") {
    header.symmetry = MmSymmetry::Symmetric;
  } else {
    fail(ErrorKind::UnsupportedSymmetry,
         "unsupported symmetry '" + banner[4] + "'");
  }

  std::size_t line_no = 1;
  require(detail::next_content_line(in, line), ErrorKind::Truncated,
          "missing size line");
  ++line_no;
  auto size_fields = detail::split_fields(line);
  require(size_fields.size() == 3, ErrorKind::ParseError,
          "size line must read 'rows cols entries'");
  const std::uint64_t m = detail::parse_u64(size_fields[0], line_no);
  const std::uint64_t n = detail::parse_u64(size_fields[1], line_no);
  const std::uint64_t declared = detail::parse_u64(size_fields[2], line_no);
  require(m <= max_dimension && n <= max_dimension, ErrorKind::Overflow,
          "matrix dimension exceeds the supported index width");
  header.m = static_cast<index_t>(m);
  header.n = static_cast<index_t>(n);
  header.declared_nnz = static_cast<index_t>(declared);

  TripletMatrix out;
  out.m = header.m;
  out.n = header.n;
  out.row_ind.reserve(declared);
  out.col_ind.reserve(declared);
  out.data.reserve(declared);

  const std::size_t expected_fields =
      header.field == MmField::Pattern ? 2u : 3u;
  for (std::uint64_t k = 0; k < declared; ++k) {
    require(detail::next_content_line(in, line), ErrorKind::Truncated,
            "entry " + std::to_string(k + 1) + " of " + std::to_string(declared) +
                " missing");
    ++line_no;
    auto fields = detail::split_fields(line);
    require(fields.size() == expected_fields, ErrorKind::ParseError,
            "line " + std::to_string(line_no) + ": expected " +
                std::to_string(expected_fields) + " fields");
    const std::uint64_t i = detail::parse_u64(fields[0], line_no);
    const std::uint64_t j = detail::parse_u64(fields[1], line_no);
    require(i >= 1 && i <= m && j >= 1 && j <= n, ErrorKind::IndexOutOfRange,
            "line " + std::to_string(line_no) + ": entry (" + std::to_string(i) +
                ", " + std::to_string(j) + ") outside " + std::to_string(m) + "x" +
                std::to_string(n));
    value_t value = 1.0;
    if (header.field != MmField::Pattern) {
      value = detail::parse_value(fields[2], line_no);
    }
    out.row_ind.push_back(static_cast<index_t>(i - 1));
    out.col_ind.push_back(static_cast<index_t>(j - 1));
    out.data.push_back(value);
    if (header.symmetry == MmSymmetry::Symmetric && i != j) {
      out.row_ind.push_back(static_cast<index_t>(j - 1));
      out.col_ind.push_back(static_cast<index_t>(i - 1));
      out.data.push_back(value);
    }
  }
  if (detail::next_content_line(in, line)) {
    fail(ErrorKind::ParseError,
         "more entries than the " + std::to_string(declared) + " declared");
  }
  validate(out);
  if (header_out) *header_out = header;
  return out;
}

}  // namespace spmvlab

#endif  // SPMVLAB_MATRIX_MARKET_HPP
