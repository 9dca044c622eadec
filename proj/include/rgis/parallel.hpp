#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace rgis {

inline unsigned default_threads() {
  const unsigned h = std::thread::hardware_concurrency();
  return h == 0 ? 1 : h;
}

/// Splits [0, count) into fixed chunks of `chunk` items and calls
/// body(chunk_index, begin, end) for each, on up to `threads` workers.
/// Chunk boundaries do not depend on the thread count, so per-chunk results
/// merged in chunk order are schedule-independent.
template <typename Body>
void parallel_chunks(std::size_t count, std::size_t chunk, unsigned threads, Body&& body) {
  if (count == 0) return;
  chunk = std::max<std::size_t>(chunk, 1);
  const std::size_t chunks = (count + chunk - 1) / chunk;
  auto run_one = [&](std::size_t c) {
    const std::size_t b = c * chunk;
    body(c, b, std::min(count, b + chunk));
  };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(chunks)));
  if (threads == 1) {
    for (std::size_t c = 0; c < chunks; ++c) run_one(c);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t c = next.fetch_add(1);
        if (c >= chunks) return;
        try {
          run_one(c);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          next.store(chunks);
        }
      }
    });
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

inline std::size_t chunk_count(std::size_t count, std::size_t chunk) {
  return count == 0 ? 0 : (count + chunk - 1) / chunk;
}

}  // namespace rgis
