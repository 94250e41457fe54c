#pragma once

#include <cstddef>
#include <functional>

namespace nwdag {

// NWDAG_THREADS if set to a positive integer, else the hardware concurrency
// (at least 1).
std::size_t worker_count();

// Calls body(i) for every i in [0, count) on up to worker_count() threads.
// Indices are split into contiguous chunks, so results written to slot i are
// independent of the thread count. The exception of the lowest failing index
// is rethrown after all workers join.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace nwdag
