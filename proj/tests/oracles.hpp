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
//
// Independent reference implementations used as test oracles. Everything in
// this header is deliberately written along a different route than the
// library code it checks.

#ifndef SPMVLAB_TESTS_ORACLES_HPP
#define SPMVLAB_TESTS_ORACLES_HPP

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <set>
#include <tuple>
#include <utility>
#include <vector>

#include "spmvlab/triplet.hpp"
#include "spmvlab/types.hpp"

namespace spmvlab::testing {

/// The running 4x4 example: (0,0)=1, (0,2)=2, (1,1)=3, (3,0)=4, (3,3)=5.
inline TripletMatrix make_e4() {
  TripletMatrix a;
  a.m = a.n = 4;
  a.row_ind = {0, 0, 1, 3, 3};
  a.col_ind = {0, 2, 1, 0, 3};
  a.data = {1.0, 2.0, 3.0, 4.0, 5.0};
  return a;
}

/// Dense-matrix oracle multiply: materializes the full m x n array.
inline DenseVector dense_spmv(const TripletMatrix& a, const DenseVector& x) {
  std::vector<double> dense(static_cast<std::size_t>(a.m) * a.n, 0.0);
  for (std::size_t k = 0; k < a.data.size(); ++k) {
    dense[static_cast<std::size_t>(a.row_ind[k]) * a.n + a.col_ind[k]] = a.data[k];
  }
  DenseVector y(a.m, 0.0);
  for (index_t i = 0; i < a.m; ++i) {
    double sum = 0.0;
    for (index_t j = 0; j < a.n; ++j) {
      sum += dense[static_cast<std::size_t>(i) * a.n + j] * x[j];
    }
    y[i] = sum;
  }
  return y;
}

/// Random sparse matrix with positive values; 'forced_rows' can make specific
/// rows dense or empty.
struct RandomMatrixSpec {
  index_t m = 64;
  index_t n = 64;
  double density = 0.05;
  index_t dense_row_nnz = 0;   // if > 0, row 0 receives this many entries
  bool leading_empty_rows = false;
};

inline TripletMatrix random_matrix(const RandomMatrixSpec& spec, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::set<std::pair<index_t, index_t>> coords;
  const auto target = static_cast<std::uint64_t>(
      spec.density * static_cast<double>(spec.m) * static_cast<double>(spec.n));
  const index_t first_row = spec.leading_empty_rows ? spec.m / 4 : 0;
  while (coords.size() < target) {
    const index_t r =
        first_row + static_cast<index_t>(rng() % std::max<index_t>(1, spec.m - first_row));
    const index_t c = static_cast<index_t>(rng() % spec.n);
    coords.emplace(r, c);
  }
  for (index_t k = 0; k < std::min<index_t>(spec.dense_row_nnz, spec.n); ++k) {
    coords.emplace(0, k);
  }
  TripletMatrix a;
  a.m = spec.m;
  a.n = spec.n;
  for (const auto& [r, c] : coords) {
    a.row_ind.push_back(r);
    a.col_ind.push_back(c);
    a.data.push_back(0.5 + static_cast<double>(rng() % 1024) / 1024.0);
  }
  // Shuffle entry order so tests do not depend on sorted input.
  std::vector<index_t> order(a.data.size());
  std::iota(order.begin(), order.end(), index_t{0});
  std::shuffle(order.begin(), order.end(), rng);
  TripletMatrix shuffled;
  shuffled.m = a.m;
  shuffled.n = a.n;
  for (index_t id : order) {
    shuffled.row_ind.push_back(a.row_ind[id]);
    shuffled.col_ind.push_back(a.col_ind[id]);
    shuffled.data.push_back(a.data[id]);
  }
  return shuffled;
}

/// Canonical sorted (row, col, value) list, for exact set comparisons.
inline std::vector<std::tuple<index_t, index_t, double>> canonical_entries(
    const TripletMatrix& a) {
  std::vector<std::tuple<index_t, index_t, double>> entries;
  for (std::size_t k = 0; k < a.data.size(); ++k) {
    entries.emplace_back(a.row_ind[k], a.col_ind[k], a.data[k]);
  }
  std::sort(entries.begin(), entries.end());
  return entries;
}

/// Z-Morton cell enumeration by literal quadrant recursion (top-left,
/// top-right, bottom-left, bottom-right).
inline void morton_order_recursive(index_t row0, index_t col0, index_t dim,
                                   std::vector<std::pair<index_t, index_t>>& out) {
  if (dim == 1) {
    out.emplace_back(row0, col0);
    return;
  }
  const index_t h = dim / 2;
  morton_order_recursive(row0, col0, h, out);
  morton_order_recursive(row0, col0 + h, h, out);
  morton_order_recursive(row0 + h, col0, h, out);
  morton_order_recursive(row0 + h, col0 + h, h, out);
}

/// Hilbert decode via the classic bottom-up rotate formulation (a different
/// algorithm than the library's top-down orientation automaton). x is the
/// column, y the row, matching the convention fixed by the figures.
inline std::pair<index_t, index_t> hilbert_d2xy_oracle(unsigned level,
                                                       std::uint64_t d) {
  std::uint64_t x = 0, y = 0;
  std::uint64_t t = d;
  for (std::uint64_t s = 1; s < (std::uint64_t{1} << level); s *= 2) {
    const std::uint64_t rx = 1 & (t / 2);
    const std::uint64_t ry = 1 & (t ^ rx);
    if (ry == 0) {
      if (rx == 1) {
        x = s - 1 - x;
        y = s - 1 - y;
      }
      std::swap(x, y);
    }
    x += s * rx;
    y += s * ry;
    t /= 4;
  }
  return {static_cast<index_t>(y), static_cast<index_t>(x)};  // (row, col)
}

/// Sequential two-list merge recording the path point on every diagonal
/// (ties consume from A).
inline std::vector<std::pair<std::size_t, std::size_t>> merge_path_oracle(
    const std::vector<long long>& a, const std::vector<long long>& b) {
  std::vector<std::pair<std::size_t, std::size_t>> path;
  std::size_t i = 0, j = 0;
  path.emplace_back(i, j);
  while (i < a.size() || j < b.size()) {
    if (i < a.size() && (j >= b.size() || a[i] <= b[j])) {
      ++i;
    } else {
      ++j;
    }
    path.emplace_back(i, j);
  }
  return path;
}

}  // namespace spmvlab::testing

#endif  // SPMVLAB_TESTS_ORACLES_HPP
