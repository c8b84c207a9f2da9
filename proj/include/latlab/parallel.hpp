#pragma once

#include <cstdint>
#include <functional>

namespace latlab {

// Number of worker threads used by parallel loops when the caller passes 0.
// Defaults to the hardware concurrency; settable once from the CLI.
int default_threads();
void set_default_threads(int n);

// Runs fn(chunk_index, begin, end) over [0, n) split into fixed-size chunks.
// The chunk layout depends only on n, never on the thread count, so work
// that accumulates per-chunk partials and merges them in chunk order is
// deterministic for any thread count.
void parallel_chunks(std::int64_t n, std::int64_t chunk_size,
                     const std::function<void(std::size_t, std::int64_t, std::int64_t)>& fn,
                     int threads = 0);

// Number of chunks parallel_chunks will produce for the given arguments.
std::size_t chunk_count(std::int64_t n, std::int64_t chunk_size);

} // namespace latlab
