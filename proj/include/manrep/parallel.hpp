// Copyright (c) 2026 manrep contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace manrep {

namespace parallel {

/// Process-wide worker count: 0 means hardware concurrency.
inline std::atomic<int>& thread_setting() {
  static std::atomic<int> value{0};
  return value;
}

inline void set_threads(int n) { thread_setting().store(n < 0 ? 0 : n); }

inline int resolve_threads() {
  int n = thread_setting().load();
  if (n == 0) {
    n = static_cast<int>(std::thread::hardware_concurrency());
    if (n <= 0) n = 1;
  }
  return n;
}

/// Static block partition of [begin, end) over the configured workers.
/// Each index is processed by exactly one worker, so results never
/// depend on the worker count.
template <typename Fn>
void for_each_index(std::int64_t begin, std::int64_t end, Fn&& fn) {
  const std::int64_t count = end - begin;
  if (count <= 0) return;
  const int threads = resolve_threads();
  if (threads <= 1 || count == 1) {
    for (std::int64_t i = begin; i < end; ++i) fn(i);
    return;
  }
  const int workers = static_cast<int>(
      std::min<std::int64_t>(threads, count));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  const std::int64_t chunk = (count + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const std::int64_t lo = begin + w * chunk;
    const std::int64_t hi = std::min(end, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (std::int64_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace parallel

}  // namespace manrep
