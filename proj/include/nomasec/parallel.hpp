// Copyright 2026 the nomasec authors
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

#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "nomasec/common.hpp"

namespace nomasec {

/// Fixed chunk width for trial partitioning. A constant (never derived from
/// the worker count) so that chunk boundaries, and therefore floating-point
/// fold order, are identical for any number of workers.
inline constexpr std::uint64_t kTrialChunk = 8192;

/// Runs `trials` Monte Carlo trials split into fixed-size chunks and folds
/// the per-chunk partial results in chunk order.
///
/// chunk_fn: Partial(first_trial, count) — must derive all randomness from
///   the trial index alone (see derive_trial_rng) so the result of a chunk
///   does not depend on which worker executes it.
/// fold:     void(Partial& accumulator, const Partial& chunk_result)
///
/// Because chunk boundaries and fold order are fixed, the returned value is
/// bit-identical for any worker count, including workers == 1.
template <class Partial, class ChunkFn, class FoldFn>
Partial run_chunked(std::uint64_t trials, unsigned workers, Partial init,
                    ChunkFn chunk_fn, FoldFn fold) {
  if (workers == 0) workers = std::thread::hardware_concurrency();
  if (workers == 0) workers = 1;
  const std::uint64_t n_chunks = (trials + kTrialChunk - 1) / kTrialChunk;

  if (workers == 1 || n_chunks <= 1) {
    Partial acc = init;
    for (std::uint64_t c = 0; c < n_chunks; ++c) {
      const std::uint64_t first = c * kTrialChunk;
      const std::uint64_t count = std::min(kTrialChunk, trials - first);
      Partial part = chunk_fn(first, count);
      fold(acc, part);
    }
    return acc;
  }

  std::vector<Partial> parts(n_chunks, init);
  std::atomic<std::uint64_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  auto work = [&] {
    try {
      while (true) {
        const std::uint64_t c = next.fetch_add(1);
        if (c >= n_chunks || failed.load()) break;
        const std::uint64_t first = c * kTrialChunk;
        const std::uint64_t count = std::min(kTrialChunk, trials - first);
        parts[c] = chunk_fn(first, count);
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!first_error) first_error = std::current_exception();
      failed.store(true);
    }
  };

  std::vector<std::thread> pool;
  const unsigned n_threads =
      static_cast<unsigned>(std::min<std::uint64_t>(workers, n_chunks));
  pool.reserve(n_threads);
  for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);

  Partial acc = init;
  for (std::uint64_t c = 0; c < n_chunks; ++c) fold(acc, parts[c]);
  return acc;
}

/// Standard error of an estimated proportion: sqrt(p(1-p)/n).
inline double proportion_std_error(double p_hat, std::uint64_t trials) {
  detail::require(trials > 0, "trials must be >= 1");
  return std::sqrt(p_hat * (1.0 - p_hat) / static_cast<double>(trials));
}

}  // namespace nomasec
