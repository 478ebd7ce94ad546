#pragma once

#include <cstddef>
#include <functional>

namespace anm {

/// Worker count for parallel sections. Defaults to the ANM_THREADS environment
/// variable, else the hardware concurrency.
std::size_t thread_count();

/// Overrides the worker count for this process (0 restores the default).
void set_thread_count(std::size_t n);

/// Calls body(i) for every i in [0, n). Iterations must write disjoint state;
/// results are then independent of the schedule. Exceptions from any
/// iteration are rethrown on the calling thread (first one wins).
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace anm
