#pragma once

#include <cstddef>
#include <functional>

namespace ordembed {

/// Number of worker threads used by parallel loops. Defaults to the
/// ORDEMBED_THREADS environment variable, else 1.
std::size_t thread_count();
void set_thread_count(std::size_t threads);

/// Runs body(begin, end) over contiguous chunks of [0, count). Chunk
/// boundaries depend only on count, never on the thread count, so callers
/// that write per-chunk results and concatenate them in chunk order get
/// output independent of scheduling.
void parallel_chunks(std::size_t count,
                     const std::function<void(std::size_t chunk, std::size_t begin, std::size_t end)>& body);

/// Number of chunks parallel_chunks will use for `count` items.
std::size_t chunk_count(std::size_t count);

/// Runs body(i) for each i in [0, count).
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace ordembed
