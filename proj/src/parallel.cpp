#include "latlab/parallel.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <vector>

namespace latlab {

namespace {
int g_default_threads = 0;
}

int default_threads() {
  if (g_default_threads > 0) return g_default_threads;
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void set_default_threads(int n) {
  if (n < 0) throw std::invalid_argument("thread count must be >= 0");
  g_default_threads = n;
}

std::size_t chunk_count(std::int64_t n, std::int64_t chunk_size) {
  if (n <= 0) return 0;
  if (chunk_size <= 0) throw std::invalid_argument("chunk_size must be positive");
  return static_cast<std::size_t>((n + chunk_size - 1) / chunk_size);
}

void parallel_chunks(std::int64_t n, std::int64_t chunk_size,
                     const std::function<void(std::size_t, std::int64_t, std::int64_t)>& fn,
                     int threads) {
  std::size_t nchunks = chunk_count(n, chunk_size);
  if (nchunks == 0) return;
  int nthreads = threads > 0 ? threads : default_threads();
  if (nthreads > static_cast<int>(nchunks)) nthreads = static_cast<int>(nchunks);

  if (nthreads <= 1) {
    for (std::size_t c = 0; c < nchunks; ++c) {
      std::int64_t lo = static_cast<std::int64_t>(c) * chunk_size;
      std::int64_t hi = std::min<std::int64_t>(lo + chunk_size, n);
      fn(c, lo, hi);
    }
    return;
  }

  std::atomic<std::size_t> next{0};
  std::mutex err_mutex;
  std::exception_ptr first_error;

  auto worker = [&]() {
    for (;;) {
      std::size_t c = next.fetch_add(1);
      if (c >= nchunks) return;
      std::int64_t lo = static_cast<std::int64_t>(c) * chunk_size;
      std::int64_t hi = std::min<std::int64_t>(lo + chunk_size, n);
      try {
        fn(c, lo, hi);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(nthreads));
  for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

} // namespace latlab
