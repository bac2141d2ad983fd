#pragma once

#include <cstddef>
#include <functional>

namespace newtonosc {

/// Worker count used by library loops. Defaults to NEWTONOSC_THREADS when
/// set, otherwise std::thread::hardware_concurrency().
std::size_t thread_count();
void set_thread_count(std::size_t n);

/// Splits [0, count) into at most thread_count() contiguous chunks and runs
/// body(begin, end, chunk_index) on each. Chunk boundaries depend only on
/// count and the thread count, so per-chunk partial results combined in chunk
/// order are reproducible. Nested calls run inline on the calling thread.
void parallel_for(std::size_t count,
                  const std::function<void(std::size_t, std::size_t, std::size_t)>& body);

/// Number of chunks parallel_for(count, ...) will use.
std::size_t chunk_count(std::size_t count);

}  // namespace newtonosc
