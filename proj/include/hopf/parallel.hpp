#pragma once
// Fixed-chunk parallel loops. Chunk boundaries depend only on the problem
// size, never on the thread count, so reductions are bit-reproducible.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace hopf {

inline constexpr std::size_t kReduceChunk = 4096;

/// Process-wide worker count; 0 means hardware concurrency.
inline unsigned& thread_count() {
  static unsigned n = 0;
  return n;
}

inline unsigned effective_threads() {
  unsigned n = thread_count();
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  return n;
}

/// Calls body(chunk_index, begin, end) for every chunk of [0, n).
template <class Body>
void for_each_chunk(std::size_t n, std::size_t chunk, Body&& body) {
  if (n == 0) return;
  const std::size_t chunks = (n + chunk - 1) / chunk;
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(effective_threads(), chunks));
  auto run = [&](std::size_t c) {
    const std::size_t b = c * chunk;
    body(c, b, std::min(n, b + chunk));
  };
  if (workers <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) run(c);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        try {
          for (std::size_t c = next++; c < chunks; c = next++) run(c);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = chunks;
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

/// Sum of term(i) over [0, n). Partial sums are combined in chunk order.
template <class Term>
double deterministic_sum(std::size_t n, Term&& term) {
  const std::size_t chunks = (n + kReduceChunk - 1) / kReduceChunk;
  std::vector<double> partial(chunks, 0.0);
  for_each_chunk(n, kReduceChunk, [&](std::size_t c, std::size_t b, std::size_t e) {
    double s = 0.0;
    for (std::size_t i = b; i < e; ++i) s += term(i);
    partial[c] = s;
  });
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

/// out[i] = f(i) for i in [0, n).
template <class T, class F>
std::vector<T> parallel_map(std::size_t n, F&& f) {
  std::vector<T> out(n);
  for_each_chunk(n, 256, [&](std::size_t, std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) out[i] = f(i);
  });
  return out;
}

}  // namespace hopf
