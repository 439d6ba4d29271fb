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

#ifndef SPMVLAB_PARALLEL_HPP
#define SPMVLAB_PARALLEL_HPP

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <utility>
#include <vector>

#include "spmvlab/types.hpp"

namespace spmvlab {

inline unsigned hardware_threads() {
  unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : n;
}

/// Runs body(worker) for worker in [0, p). Worker 0 executes on the calling
/// thread, so p = 1 never spawns. The first exception thrown by any worker is
/// rethrown after the join.
template <typename Body>
void parallel_run(unsigned p, Body&& body) {
  require(p >= 1, ErrorKind::InvalidArgument, "worker count must be >= 1");
  if (p == 1) {
    body(0u);
    return;
  }
  std::vector<std::thread> threads;
  threads.reserve(p - 1);
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto guarded = [&](unsigned worker) {
    try {
      body(worker);
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!first_error) first_error = std::current_exception();
    }
  };
  for (unsigned w = 1; w < p; ++w) threads.emplace_back(guarded, w);
  guarded(0u);
  for (auto& t : threads) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

/// Splits [0, count) into p near-equal contiguous ranges; range w is
/// [chunk_begin(count, p, w), chunk_begin(count, p, w + 1)).
inline std::size_t chunk_begin(std::size_t count, unsigned p, unsigned w) {
  return count * static_cast<std::size_t>(w) / p;
}

/// Comparison sort over [first, last): p-way chunked std::sort followed by
/// pairwise std::inplace_merge rounds. Any total order works; speedup is a
/// bonus, not a correctness requirement.
template <typename Iter, typename Compare>
void parallel_chunk_sort(Iter first, Iter last, unsigned p, Compare comp) {
  const std::size_t count = static_cast<std::size_t>(last - first);
  if (p <= 1 || count < 1u << 14) {
    std::sort(first, last, comp);
    return;
  }
  std::vector<std::size_t> bounds(p + 1);
  for (unsigned w = 0; w <= p; ++w) bounds[w] = chunk_begin(count, p, w);
  parallel_run(p, [&](unsigned w) {
    std::sort(first + bounds[w], first + bounds[w + 1], comp);
  });
  for (unsigned stride = 1; stride < p; stride *= 2) {
    std::vector<std::pair<unsigned, unsigned>> merges;
    for (unsigned w = 0; w + stride < p; w += 2 * stride) {
      merges.emplace_back(w, std::min<unsigned>(w + 2 * stride, p));
    }
    parallel_run(std::max<unsigned>(1, static_cast<unsigned>(merges.size())),
                 [&](unsigned i) {
                   if (i >= merges.size()) return;
                   auto [lo, hi] = merges[i];
                   std::inplace_merge(first + bounds[lo], first + bounds[lo + stride],
                                      first + bounds[hi], comp);
                 });
  }
}

}  // namespace spmvlab

#endif  // SPMVLAB_PARALLEL_HPP
