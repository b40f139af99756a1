#pragma once
// Thread pool-free parallel loops. The work is split into a fixed chunk grid
// whose layout depends only on n, never on the number of workers, so any
// reduction done per chunk and then combined in chunk order is byte-for-byte
// reproducible across --jobs values.

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace dsphere {

inline unsigned default_jobs() {
  unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : n;
}

inline constexpr std::size_t kChunkGrid = 256;

// body(chunk_index, begin, end). Chunk boundaries are a function of n alone.
template <class Body>
void parallel_chunks(std::size_t n, unsigned jobs, Body&& body) {
  if (n == 0) return;
  const std::size_t nchunks = n < kChunkGrid ? n : kChunkGrid;
  auto chunk_begin = [&](std::size_t c) { return c * n / nchunks; };
  if (jobs <= 1 || nchunks == 1) {
    for (std::size_t c = 0; c < nchunks; ++c)
      body(c, chunk_begin(c), chunk_begin(c + 1));
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      std::size_t c = next.fetch_add(1);
      if (c >= nchunks) return;
      body(c, chunk_begin(c), chunk_begin(c + 1));
    }
  };
  std::vector<std::thread> threads;
  unsigned nthreads = jobs < nchunks ? jobs : static_cast<unsigned>(nchunks);
  threads.reserve(nthreads);
  for (unsigned t = 0; t < nthreads; ++t) threads.emplace_back(worker);
  for (auto& t : threads) t.join();
}

// body(i) for i in [0, n); no reduction, writes must be disjoint.
template <class Body>
void parallel_for(std::size_t n, unsigned jobs, Body&& body) {
  parallel_chunks(n, jobs, [&](std::size_t, std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) body(i);
  });
}

}  // namespace dsphere
