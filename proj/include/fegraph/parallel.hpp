#pragma once

#include <cstddef>
#include <functional>

namespace fegraph {

// 0 -> hardware concurrency, otherwise the request itself (minimum 1).
int resolve_threads(int requested);

// Applies fn(begin, end) to contiguous chunks of [0, count), one chunk per
// worker. Chunk boundaries depend only on count and the resolved thread
// count, and workers write disjoint ranges, so callers that partition their
// output by index get results independent of scheduling. The first exception
// thrown by any worker is rethrown on the calling thread.
void parallel_chunks(std::size_t count, int threads,
                     const std::function<void(std::size_t, std::size_t)>& fn);

} // namespace fegraph
