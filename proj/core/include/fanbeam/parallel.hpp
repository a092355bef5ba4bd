#ifndef FANBEAM_PARALLEL_HPP
#define FANBEAM_PARALLEL_HPP

#include <cstdint>
#include <functional>

namespace fanbeam {

/// Number of worker threads used by parallel loops. Defaults to the value of
/// the FANBEAM_THREADS environment variable, or hardware concurrency if unset.
int thread_count();

/// Overrides the worker count (1 disables threading). Takes effect on the
/// next parallel loop.
void set_thread_count(int n);

/// Runs body(lo, hi) over a fixed contiguous partition of [begin, end) into
/// thread_count() chunks. Chunk boundaries depend only on the range and the
/// worker count, so results of disjoint-write loops are reproducible at a
/// fixed thread count. Nested calls run inline on the calling worker.
void parallel_for(std::int64_t begin, std::int64_t end,
                  const std::function<void(std::int64_t, std::int64_t)>& body);

} // namespace fanbeam

#endif
