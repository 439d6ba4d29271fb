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

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numeric>
#include <vector>

#include "oracles.hpp"
#include "spmvlab/bcoh.hpp"
#include "spmvlab/block_size.hpp"
#include "spmvlab/csb.hpp"
#include "spmvlab/mergeb.hpp"
#include "spmvlab/storage.hpp"

using namespace spmvlab;
using namespace spmvlab::testing;

namespace {

/// Direct evaluation of the block-size rule with floating-point logs.
unsigned block_size_oracle(double n, unsigned cap, double l2_bytes,
                           double value_size) {
  int lb = 3 + static_cast<int>(std::ceil(std::log2(std::sqrt(n))));
  auto ok = [&](int b) {
    return b <= static_cast<int>(cap) &&
           2.0 * std::pow(2.0, b) * value_size <= l2_bytes / 2.0;
  };
  while (lb > 1 && !ok(lb)) --lb;
  return static_cast<unsigned>(lb);
}

TripletMatrix dense_matrix(index_t m, index_t n) {
  TripletMatrix a;
  a.m = m;
  a.n = n;
  for (index_t r = 0; r < m; ++r) {
    for (index_t c = 0; c < n; ++c) {
      a.row_ind.push_back(r);
      a.col_ind.push_back(c);
      a.data.push_back(1.0 + r * n + c);
    }
  }
  return a;
}

}  // namespace

TEST_CASE("select_block_size matches the direct-evaluation oracle") {
  const std::uint64_t l2 = 524288;
  SECTION("spec instances") {
    REQUIRE(select_block_size(1000000, 16, l2, 8).beta == 8192);
    REQUIRE(select_block_size(1000000, 15, 1ull << 40, 8).beta == 8192);
    REQUIRE(select_block_size(4, 16, 1ull << 40, 8).beta == 16);
  }
  SECTION("oracle sweep over n and caps") {
    for (std::uint64_t n : {4ull, 1000ull, 1000000ull, 1000000000ull}) {
      for (unsigned cap : {16u, 15u}) {
        for (std::uint64_t bytes : {64ull * 1024, 512ull * 1024, 1ull << 40}) {
          REQUIRE(select_block_size(n, cap, bytes, 8).log2_beta ==
                  block_size_oracle(static_cast<double>(n), cap,
                                    static_cast<double>(bytes), 8.0));
        }
      }
    }
  }
  SECTION("monotone in stricter caps and smaller budgets") {
    for (std::uint64_t n : {64ull, 4096ull, 1048576ull}) {
      unsigned prev = 32;
      for (unsigned cap : {16u, 12u, 8u, 4u}) {
        const unsigned lb = select_block_size(n, cap, 1ull << 40, 8).log2_beta;
        REQUIRE(lb <= prev);
        prev = lb;
      }
      prev = 32;
      for (std::uint64_t bytes : {1ull << 30, 1ull << 20, 1ull << 14, 1ull << 8}) {
        const unsigned lb = select_block_size(n, 16, bytes, 8).log2_beta;
        REQUIRE(lb <= prev);
        prev = lb;
      }
    }
  }
  SECTION("floors at beta = 2") {
    REQUIRE(select_block_size(1u << 20, 16, 16, 8).beta == 2);
  }
}

TEST_CASE("pack_index layout and inverse") {
  REQUIRE(pack_index(3, 5) == 196613);
  REQUIRE(pack_index(0, 0) == 0);
  std::mt19937_64 rng(3);
  for (int k = 0; k < 10000; ++k) {
    const index_t r = rng() % (1u << 16);
    const index_t c = rng() % (1u << 16);
    REQUIRE(unpack_index(pack_index(r, c)) == std::pair{r, c});
  }
  REQUIRE_THROWS_AS(pack_index(1u << 16, 0), Error);
}

TEST_CASE("partition_rows_by_nnz splits evenly and aligns to blocks") {
  const BlockSize beta = make_block_size(2);  // beta = 4

  SECTION("uniform rows split symmetrically") {
    const index_t m = 8 * beta.beta;
    std::vector<index_t> prefix(m + 1);
    std::iota(prefix.begin(), prefix.end(), index_t{0});
    const auto bounds = partition_rows_by_nnz(prefix, 2, beta);
    REQUIRE(bounds == std::vector<index_t>{0, 4 * beta.beta, m});
  }

  SECTION("all nonzeros in row 0: first band holds them, later bands get rows") {
    const index_t m = 8 * beta.beta;
    std::vector<index_t> prefix(m + 1, 100);
    prefix[0] = 0;
    const auto bounds = partition_rows_by_nnz(prefix, 4, beta);
    REQUIRE(bounds ==
            std::vector<index_t>{0, beta.beta, 2 * beta.beta, 3 * beta.beta, m});
  }

  SECTION("boundaries are block multiples; bands cover the rows") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
      const index_t m = 1 + rng() % 40;
      const unsigned p = 1 + rng() % 6;
      std::vector<index_t> prefix(m + 1, 0);
      for (index_t i = 0; i < m; ++i) prefix[i + 1] = prefix[i] + rng() % 9;
      const auto bounds = partition_rows_by_nnz(prefix, p, beta);
      REQUIRE(bounds.front() == 0);
      REQUIRE(bounds.back() == m);
      for (unsigned k = 1; k < p; ++k) {
        // Multiples of beta, except a boundary that already hit the ragged
        // final row bound m.
        REQUIRE((bounds[k] % beta.beta == 0 || bounds[k] == m));
        REQUIRE(bounds[k] >= bounds[k - 1]);
      }
      const index_t block_rows = blocks_covering(m, beta);
      if (block_rows >= p) {
        for (unsigned k = 0; k < p; ++k) REQUIRE(bounds[k + 1] > bounds[k]);
      }
    }
  }

  SECTION("max band nnz within one block row of the unaligned greedy optimum") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 60; ++trial) {
      const index_t m = 3 * beta.beta + rng() % 29;
      const unsigned p = 3;
      std::vector<index_t> prefix(m + 1, 0);
      for (index_t i = 0; i < m; ++i) prefix[i + 1] = prefix[i] + rng() % 7;
      const index_t nnz = prefix[m];
      // Unaligned greedy reference cuts.
      std::vector<index_t> greedy{0};
      for (unsigned k = 1; k < p; ++k) {
        index_t r = 0;
        while (r < m && static_cast<std::uint64_t>(prefix[r]) * p <
                            static_cast<std::uint64_t>(nnz) * k) {
          ++r;
        }
        greedy.push_back(std::max(r, greedy.back()));
      }
      greedy.push_back(m);
      auto max_band = [&](const std::vector<index_t>& bounds) {
        index_t best = 0;
        for (std::size_t k = 0; k + 1 < bounds.size(); ++k) {
          best = std::max(best, prefix[bounds[k + 1]] - prefix[bounds[k]]);
        }
        return best;
      };
      index_t max_block_row = 0;
      for (index_t b = 0; b < blocks_covering(m, beta); ++b) {
        const index_t lo = b * beta.beta;
        const index_t hi = std::min<index_t>(m, lo + beta.beta);
        max_block_row = std::max(max_block_row, prefix[hi] - prefix[lo]);
      }
      const auto bounds = partition_rows_by_nnz(prefix, p, beta);
      REQUIRE(max_band(bounds) <= max_band(greedy) + max_block_row);
    }
  }

  SECTION("more threads than block rows leaves trailing bands empty") {
    std::vector<index_t> prefix{0, 1, 2, 3};  // m = 3, one block row at beta=4
    const auto bounds = partition_rows_by_nnz(prefix, 4, beta);
    REQUIRE(bounds == std::vector<index_t>{0, 3, 3, 3, 3});
  }
}

TEST_CASE("build_csb populates blk_ptr by block-row-major counting") {
  const auto a = make_e4();
  const auto csb = build_csb(a, make_block_size(1), CurveKind::ZMorton);
  REQUIRE(csb.block_rows == 2);
  REQUIRE(csb.block_cols == 2);
  // Cells (0,0), (0,1), (1,0), (1,1) hold 2, 1, 1, 1 elements.
  REQUIRE(csb.blk_ptr == std::vector<index_t>{0, 2, 3, 4, 5});
}

TEST_CASE("build_csb degenerate single block keeps pure curve order") {
  const auto a = make_e4();
  const auto csb = build_csb(a, make_block_size(2), CurveKind::ZMorton);
  REQUIRE(csb.block_rows == 1);
  REQUIRE(csb.block_cols == 1);
  REQUIRE(csb.blk_ptr == std::vector<index_t>{0, 5});
  for (std::size_t k = 1; k < csb.packed.size(); ++k) {
    REQUIRE(curve_rank(CurveKind::ZMorton, packed_row(csb.packed[k - 1]),
                       packed_col(csb.packed[k - 1]), 2) <
            curve_rank(CurveKind::ZMorton, packed_row(csb.packed[k]),
                       packed_col(csb.packed[k]), 2));
  }
}

TEST_CASE("csbh blocks are sorted by the figure's hilbert order") {
  const auto a = dense_matrix(4, 4);
  const auto csb = build_csb(a, make_block_size(1), CurveKind::Hilbert);
  // Block (0,0) holds cells (0,0), (1,0), (1,1), (0,1) in that order.
  const std::vector<std::pair<index_t, index_t>> expected = {
      {0, 0}, {1, 0}, {1, 1}, {0, 1}};
  for (std::size_t k = 0; k < 4; ++k) {
    REQUIRE(unpack_index(csb.packed[k]) == expected[k]);
  }
}

TEST_CASE("bcoh visits blocks in hilbert order") {
  const auto a = make_e4();
  const auto bcoh = build_bcoh(a, make_block_size(1), 1, bcoh_variant);
  REQUIRE(bcoh.bands.size() == 1);
  std::vector<std::pair<index_t, index_t>> visited;
  detail::bcoh_for_each_block(bcoh, bcoh.bands[0],
                              [&](index_t br, index_t bc, std::size_t, std::size_t) {
                                visited.emplace_back(br, bc);
                              });
  const std::vector<std::pair<index_t, index_t>> expected = {
      {0, 0}, {1, 0}, {1, 1}, {0, 1}};
  REQUIRE(visited == expected);
}

TEST_CASE("bcohch element order equals the level-2 hilbert curve on a dense 4x4") {
  const auto a = dense_matrix(4, 4);
  const auto bcoh = build_bcoh(a, make_block_size(1), 1, bcohch_variant);
  std::vector<std::pair<index_t, index_t>> order;
  detail::bcoh_for_each_element(bcoh, bcoh.bands[0],
                                [&](index_t r, index_t c, value_t) {
                                  order.emplace_back(r, c);
                                });
  const std::vector<std::pair<index_t, index_t>> expected = {
      {0, 0}, {0, 1}, {1, 1}, {1, 0}, {2, 0}, {3, 0}, {3, 1}, {2, 1},
      {2, 2}, {3, 2}, {3, 3}, {2, 3}, {1, 3}, {1, 2}, {0, 2}, {0, 3}};
  REQUIRE(order == expected);
}

TEST_CASE("bcohchp block-level pointer storage costs about 4/7 of bicrs") {
  for (index_t grid : {8u, 16u, 32u, 64u}) {
    // One element per block makes the block matrix fully dense.
    TripletMatrix a;
    const index_t beta = 4;
    a.m = a.n = grid * beta;
    for (index_t br = 0; br < grid; ++br) {
      for (index_t bc = 0; bc < grid; ++bc) {
        a.row_ind.push_back(br * beta);
        a.col_ind.push_back(bc * beta);
        a.data.push_back(1.0);
      }
    }
    const auto bicrs_level = build_bcoh(a, make_block_size(2), 1, bcohch_variant);
    const auto pointer_level = build_bcoh(a, make_block_size(2), 1, bcohchp_variant);
    const double ratio =
        static_cast<double>(bcoh_block_level_bytes(pointer_level)) /
        static_cast<double>(bcoh_block_level_bytes(bicrs_level));
    REQUIRE(ratio > (4.0 / 7.0) * 0.9);
    REQUIRE(ratio < (4.0 / 7.0) * 1.1);
  }
}

TEST_CASE("build_mergeb block-level crs on E4") {
  const auto a = make_e4();
  const auto mb = build_mergeb(a, make_block_size(1), false);
  REQUIRE(mb.blk_row_ptr == std::vector<index_t>{0, 2, 4});
  REQUIRE(mb.blk_col_ind == std::vector<index_t>{0, 1, 0, 1});

  TripletMatrix empty;
  empty.m = empty.n = 4;
  const auto mb_empty = build_mergeb(empty, make_block_size(1), false);
  REQUIRE(mb_empty.blk_row_ptr == std::vector<index_t>{0, 0, 0});
}

TEST_CASE("mergebh orders elements inside blocks along the hilbert curve") {
  const auto a = dense_matrix(2, 2);
  const auto mb = build_mergeb(a, make_block_size(1), true);
  const std::vector<std::pair<index_t, index_t>> expected = {
      {0, 0}, {1, 0}, {1, 1}, {0, 1}};
  for (std::size_t k = 0; k < 4; ++k) {
    REQUIRE(unpack_index(mb.packed[k]) == expected[k]);
  }
}

TEST_CASE("every blocked build round-trips the exact nonzero set") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    RandomMatrixSpec spec;
    spec.m = 30 + 17 * seed;
    spec.n = 50 + 5 * seed;
    spec.density = 0.06;
    spec.leading_empty_rows = seed % 2 == 0;
    const auto a = random_matrix(spec, seed * 101);
    const auto reference = canonical_entries(a);
    const BlockSize beta = make_block_size(1 + seed % 3);

    for (CurveKind curve : {CurveKind::ZMorton, CurveKind::Hilbert}) {
      REQUIRE(canonical_entries(csb_to_triplet(build_csb(a, beta, curve))) ==
              reference);
    }
    for (bool hilbert : {false, true}) {
      REQUIRE(canonical_entries(mergeb_to_triplet(build_mergeb(a, beta, hilbert))) ==
              reference);
    }
    for (const auto& variant :
         {bcoh_variant, bcohc_variant, bcohch_variant, bcohchp_variant}) {
      for (unsigned p : {1u, 3u}) {
        REQUIRE(canonical_entries(bcoh_to_triplet(build_bcoh(a, beta, p, variant))) ==
                reference);
      }
    }
  }
}

namespace {

/// Storage order of a built format, element by element.
template <typename Convert>
std::vector<std::pair<index_t, index_t>> storage_order(Convert&& converted) {
  std::vector<std::pair<index_t, index_t>> order;
  for (std::size_t k = 0; k < converted.data.size(); ++k) {
    order.emplace_back(converted.row_ind[k], converted.col_ind[k]);
  }
  return order;
}

}  // namespace

TEST_CASE("element order equals a sequential sort by the documented key") {
  RandomMatrixSpec spec;
  spec.m = 90;
  spec.n = 70;
  spec.density = 0.08;
  const auto a = random_matrix(spec, 77);
  const BlockSize beta = make_block_size(2);
  const unsigned lb = beta.log2_beta;
  const index_t mask = beta.beta - 1;

  std::vector<index_t> ids(a.nnz());
  std::iota(ids.begin(), ids.end(), index_t{0});

  SECTION("csb: block row, block col, morton rank") {
    auto key_sorted = ids;
    std::stable_sort(key_sorted.begin(), key_sorted.end(), [&](index_t l, index_t r) {
      const auto kl = std::tuple(a.row_ind[l] >> lb, a.col_ind[l] >> lb,
                                 curve_rank(CurveKind::ZMorton, a.row_ind[l] & mask,
                                            a.col_ind[l] & mask, lb));
      const auto kr = std::tuple(a.row_ind[r] >> lb, a.col_ind[r] >> lb,
                                 curve_rank(CurveKind::ZMorton, a.row_ind[r] & mask,
                                            a.col_ind[r] & mask, lb));
      return kl < kr;
    });
    std::vector<std::pair<index_t, index_t>> expected;
    for (index_t id : key_sorted) expected.emplace_back(a.row_ind[id], a.col_ind[id]);
    REQUIRE(storage_order(csb_to_triplet(build_csb(a, beta, CurveKind::ZMorton))) ==
            expected);
  }

  SECTION("bcohch: band then global hilbert rank") {
    const unsigned p = 2;
    const auto prefix = row_prefix(a);
    const auto bounds = partition_rows_by_nnz(prefix, p, beta);
    const unsigned level = std::max(covering_level(a.m, a.n), lb);
    auto band_of = [&](index_t row) {
      unsigned b = 0;
      while (row >= bounds[b + 1]) ++b;
      return b;
    };
    auto key_sorted = ids;
    std::stable_sort(key_sorted.begin(), key_sorted.end(), [&](index_t l, index_t r) {
      const auto kl =
          std::tuple(band_of(a.row_ind[l]),
                     hilbert_encode(a.row_ind[l], a.col_ind[l], level).value);
      const auto kr =
          std::tuple(band_of(a.row_ind[r]),
                     hilbert_encode(a.row_ind[r], a.col_ind[r], level).value);
      return kl < kr;
    });
    std::vector<std::pair<index_t, index_t>> expected;
    for (index_t id : key_sorted) expected.emplace_back(a.row_ind[id], a.col_ind[id]);
    REQUIRE(storage_order(bcoh_to_triplet(build_bcoh(a, beta, p, bcohch_variant))) ==
            expected);
  }

  SECTION("mergeb: block row, block col, row-wise inside") {
    auto key_sorted = ids;
    std::stable_sort(key_sorted.begin(), key_sorted.end(), [&](index_t l, index_t r) {
      const auto kl = std::tuple(a.row_ind[l] >> lb, a.col_ind[l] >> lb,
                                 a.row_ind[l] & mask, a.col_ind[l] & mask);
      const auto kr = std::tuple(a.row_ind[r] >> lb, a.col_ind[r] >> lb,
                                 a.row_ind[r] & mask, a.col_ind[r] & mask);
      return kl < kr;
    });
    std::vector<std::pair<index_t, index_t>> expected;
    for (index_t id : key_sorted) expected.emplace_back(a.row_ind[id], a.col_ind[id]);
    REQUIRE(storage_order(mergeb_to_triplet(build_mergeb(a, beta, false))) ==
            expected);
  }
}

TEST_CASE("storage accounting matches the analytic formulas") {
  RandomMatrixSpec spec;
  spec.m = 64;
  spec.n = 64;
  spec.density = 0.1;
  const auto a = random_matrix(spec, 5);
  const BlockSize beta = make_block_size(3);

  SECTION("csb index bytes = 4*nnz + 4*(cells+1)") {
    const auto csb = build_csb(a, beta, CurveKind::ZMorton);
    const auto report = storage_report(csb);
    const std::size_t cells =
        static_cast<std::size_t>(csb.block_rows) * csb.block_cols;
    REQUIRE(report.index_bytes() == 4 * a.nnz() + 4 * (cells + 1));
    REQUIRE(report.bytes("data") == 8 * a.nnz());
  }

  SECTION("bcoh in-block icrs: 2 bytes per element + 2 per nonempty block row") {
    const auto bcoh = build_bcoh(a, beta, 1, bcoh_variant);
    const auto report = storage_report(bcoh);
    REQUIRE(report.bytes("col_inc") == 2 * a.nnz());
    std::size_t nonempty_block_rows = 0;
    std::set<std::tuple<index_t, index_t, index_t>> rows_seen;
    const unsigned lb = beta.log2_beta;
    for (std::size_t k = 0; k < a.data.size(); ++k) {
      rows_seen.insert({a.row_ind[k] >> lb, a.col_ind[k] >> lb, a.row_ind[k]});
    }
    nonempty_block_rows = rows_seen.size();
    REQUIRE(report.bytes("row_jump") == 2 * nonempty_block_rows);
  }

  SECTION("bcohc packed bytes = 4 per element") {
    const auto bcoh = build_bcoh(a, beta, 2, bcohc_variant);
    const auto report = storage_report(bcoh);
    REQUIRE(report.bytes("packed") == 4 * a.nnz());
    REQUIRE(report.bytes("block_nnz") % 4 == 0);
  }
}

TEST_CASE("band block grids beyond 2^15 are rejected") {
  TripletMatrix wide;
  wide.m = 1;
  wide.n = (1u << 16) + 8;
  wide.row_ind = {0};
  wide.col_ind = {0};
  wide.data = {1.0};
  try {
    build_bcoh(wide, make_block_size(1), 1, bcohc_variant);
    FAIL("overwide band grid accepted");
  } catch (const Error& e) {
    REQUIRE(e.kind() == ErrorKind::Overflow);
  }
}

TEST_CASE("block size caps are enforced") {
  const auto a = make_e4();
  REQUIRE_THROWS_AS(build_bcoh(a, make_block_size(16), 1, bcohc_variant), Error);
  REQUIRE_THROWS_AS(build_csb(a, make_block_size(17), CurveKind::ZMorton), Error);
  REQUIRE_THROWS_AS(build_bcoh(a, make_block_size(2), 1,
                               BcohVariant{BcohInBlock::Icrs,
                                           BcohInBlockOrder::Hilbert,
                                           BcohBlockLevel::Bicrs}),
                    Error);
}
