#pragma once

#include <algorithm>
#include <atomic>
#include <stdexcept>
#include <thread>
#include <vector>

namespace wigcp {

template <class Body>
Estimate run_chunked(std::uint64_t samples, std::uint64_t chunk_size, int workers, Body body) {
  if (samples < 2) throw std::invalid_argument("need at least 2 samples");
  if (chunk_size < 1) throw std::invalid_argument("chunk size must be positive");
  if (workers < 1) throw std::invalid_argument("workers must be >= 1");
  const std::uint64_t chunks = (samples + chunk_size - 1) / chunk_size;
  std::vector<Estimate> parts(chunks);
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};

  auto worker = [&] {
    for (;;) {
      const std::uint64_t c = next.fetch_add(1);
      if (c >= chunks || failed.load()) return;
      const std::uint64_t begin = c * chunk_size;
      const std::uint64_t count = std::min(chunk_size, samples - begin);
      try {
        parts[c] = body(c, count);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
        return;
      }
    }
  };

  const int nthreads = static_cast<int>(std::min<std::uint64_t>(workers, chunks));
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
  return reduce_estimates(parts);
}

}  // namespace wigcp
