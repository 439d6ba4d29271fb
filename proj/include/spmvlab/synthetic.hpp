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

#ifndef SPMVLAB_SYNTHETIC_HPP
#define SPMVLAB_SYNTHETIC_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <unordered_set>
#include <vector>

#include "spmvlab/triplet.hpp"
#include "spmvlab/types.hpp"

namespace spmvlab {

namespace detail {

/// Unbiased draw from [0, bound) with behaviour pinned to mt19937_64 output
/// only (standard distributions are implementation-defined).
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound + 1) % bound;
  for (;;) {
    const std::uint64_t draw = rng();
    if (draw <= limit) return draw % bound;
  }
}

inline double uniform_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace detail

/// Unstructured test-matrix generator. Each nonzero picks its row from the
/// weight profile (r+1)^(-row_skew_exponent) (a truncated power law over the
/// rows; 0 gives the uniform multinomial model); per row, that many distinct
/// columns are sampled uniformly. Rows whose draw exceeds n are truncated, so
/// the achieved count can fall below target_nnz; callers read it off nnz().
/// Values are uniform in [0.5, 1.5). Deterministic for a fixed seed.
inline TripletMatrix generate_synthetic(index_t m, index_t n,
                                        std::uint64_t target_nnz,
                                        double row_skew_exponent,
                                        std::uint64_t seed) {
  require(m >= 1 && n >= 1, ErrorKind::InvalidArgument,
          "matrix dimensions must be positive");
  require(m <= max_dimension && n <= max_dimension, ErrorKind::Overflow,
          "matrix dimension exceeds the supported index width");
  require(target_nnz <= static_cast<std::uint64_t>(m) * n,
          ErrorKind::InvalidArgument,
          "target nonzero count exceeds the matrix capacity");
  require(row_skew_exponent >= 0.0, ErrorKind::InvalidArgument,
          "row skew exponent must be nonnegative");

  std::mt19937_64 rng(seed);

  // Cumulative row weights; binary search turns a uniform draw into a row.
  std::vector<index_t> counts(m, 0);
  if (row_skew_exponent == 0.0) {
    for (std::uint64_t k = 0; k < target_nnz; ++k) {
      ++counts[detail::uniform_below(rng, m)];
    }
  } else {
    std::vector<double> cumulative(m);
    double total = 0.0;
    for (index_t r = 0; r < m; ++r) {
      total += std::pow(static_cast<double>(r) + 1.0, -row_skew_exponent);
      cumulative[r] = total;
    }
    for (std::uint64_t k = 0; k < target_nnz; ++k) {
      const double u = detail::uniform_unit(rng) * total;
      const auto it = std::lower_bound(cumulative.begin(), cumulative.end(), u);
      ++counts[static_cast<index_t>(it - cumulative.begin())];
    }
  }

  TripletMatrix out;
  out.m = m;
  out.n = n;
  out.row_ind.reserve(target_nnz);
  out.col_ind.reserve(target_nnz);
  out.data.reserve(target_nnz);

  std::unordered_set<index_t> chosen;
  std::vector<index_t> dense_pick;
  for (index_t r = 0; r < m; ++r) {
    const index_t count = std::min<index_t>(counts[r], n);
    if (count == 0) continue;
    if (count * 2 >= n) {
      // Dense row: partial Fisher-Yates over all columns.
      dense_pick.resize(n);
      std::iota(dense_pick.begin(), dense_pick.end(), index_t{0});
      for (index_t k = 0; k < count; ++k) {
        const auto pick =
            k + static_cast<index_t>(detail::uniform_below(rng, n - k));
        std::swap(dense_pick[k], dense_pick[pick]);
        out.row_ind.push_back(r);
        out.col_ind.push_back(dense_pick[k]);
        out.data.push_back(0.5 + detail::uniform_unit(rng));
      }
    } else {
      // Floyd's sampling of `count` distinct columns.
      chosen.clear();
      for (index_t k = n - count; k < n; ++k) {
        index_t candidate =
            static_cast<index_t>(detail::uniform_below(rng, k + 1));
        if (!chosen.insert(candidate).second) {
          candidate = k;
          chosen.insert(candidate);
        }
        out.row_ind.push_back(r);
        out.col_ind.push_back(candidate);
        out.data.push_back(0.5 + detail::uniform_unit(rng));
      }
    }
  }
  return out;
}

}  // namespace spmvlab

#endif  // SPMVLAB_SYNTHETIC_HPP
