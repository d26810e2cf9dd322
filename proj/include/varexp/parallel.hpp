#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace varexp {

/// Worker cap: VAREXP_THREADS if set (>= 1), else hardware concurrency.
inline int worker_count() {
  if (const char* s = std::getenv("VAREXP_THREADS")) {
    long v = std::strtol(s, nullptr, 10);
    if (v >= 1) return int(std::min(v, 256l));
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc ? int(hc) : 1;
}

/// Run `fn(chunk_index, begin, end)` over [0, n) split into fixed-size
/// chunks and collect one Result per chunk, in chunk order. The chunk grid
/// does not depend on the worker count, so any per-chunk seeding gives
/// results that are independent of how many threads actually ran.
template <class Result, class Fn>
std::vector<Result> map_chunked(long n, long chunk_size, Fn fn) {
  if (n <= 0) return {};
  const long n_chunks = (n + chunk_size - 1) / chunk_size;
  std::vector<Result> results(static_cast<std::size_t>(n_chunks));
  const int workers = std::min<long>(worker_count(), n_chunks);
  auto run = [&](long c) {
    const long b = c * chunk_size;
    const long e = std::min(n, b + chunk_size);
    results[std::size_t(c)] = fn(c, b, e);
  };
  if (workers <= 1) {
    for (long c = 0; c < n_chunks; ++c) run(c);
    return results;
  }
  std::atomic<long> next{0};
  std::vector<std::thread> pool;
  pool.reserve(std::size_t(workers));
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (long c = next.fetch_add(1); c < n_chunks; c = next.fetch_add(1)) run(c);
    });
  for (auto& t : pool) t.join();
  return results;
}

}  // namespace varexp
