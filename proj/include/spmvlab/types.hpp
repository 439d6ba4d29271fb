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

#ifndef SPMVLAB_TYPES_HPP
#define SPMVLAB_TYPES_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace spmvlab {

/// Global index type. 32-bit by default; define SPMVLAB_INDEX64 for matrices
/// whose nnz does not fit 32 bits.
#ifdef SPMVLAB_INDEX64
using index_t = std::uint64_t;
#else
using index_t = std::uint32_t;
#endif

/// Signed type wide enough to hold any (B)ICRS increment, including the
/// row-change offset +n.
using signed_index_t = std::int64_t;

using value_t = double;

/// Dense vectors are plain contiguous arrays of values.
using DenseVector = std::vector<value_t>;

/// Largest admissible dimension: keeps n + column increments representable in
/// signed_index_t and Hilbert keys for the full element grid inside 64 bits
/// (level <= 31).
inline constexpr std::uint64_t max_dimension = std::uint64_t{1} << 31;

enum class ErrorKind {
  DimensionMismatch,   // vector length does not match the matrix
  InvalidArgument,     // bad parameter (thread count, block size, ...)
  CorruptFormat,       // replay/consistency violation inside a storage format
  Overflow,            // value does not fit the compressed index width
  BadHeader,           // Matrix Market banner malformed
  UnsupportedFormat,   // Matrix Market "array" bodies
  UnsupportedField,    // complex values
  UnsupportedSymmetry, // skew-symmetric / hermitian
  IndexOutOfRange,     // entry coordinates outside the declared shape
  DuplicateEntry,      // repeated (row, col) coordinate
  ParseError,          // unparsable entry line or count mismatch
  Truncated,           // input ended early (cache files, MM bodies)
  BadMagic,            // cache file tag/version mismatch
  IoError,             // underlying stream failure
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DimensionMismatch: return "dimension mismatch";
    case ErrorKind::InvalidArgument: return "invalid argument";
    case ErrorKind::CorruptFormat: return "corrupt format";
    case ErrorKind::Overflow: return "index overflow";
    case ErrorKind::BadHeader: return "bad header";
    case ErrorKind::UnsupportedFormat: return "unsupported format";
    case ErrorKind::UnsupportedField: return "unsupported field";
    case ErrorKind::UnsupportedSymmetry: return "unsupported symmetry";
    case ErrorKind::IndexOutOfRange: return "index out of range";
    case ErrorKind::DuplicateEntry: return "duplicate entry";
    case ErrorKind::ParseError: return "parse error";
    case ErrorKind::Truncated: return "truncated input";
    case ErrorKind::BadMagic: return "bad magic";
    case ErrorKind::IoError: return "i/o error";
  }
  return "unknown";
}

/// Single exception type for the whole library; `kind` allows callers and
/// tests to distinguish failure classes without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

inline void require(bool condition, ErrorKind kind, const std::string& message) {
  if (!condition) fail(kind, message);
}

}  // namespace spmvlab

#endif  // SPMVLAB_TYPES_HPP
