#pragma once

#include <cstddef>
#include <functional>

namespace faultflow {

/// Worker count: FAULTFLOW_THREADS if set and positive, otherwise the
/// hardware concurrency (at least 1).
std::size_t worker_count();

/// Calls body(i) for i in [0, n) on up to `workers` threads.  Indices are
/// split into contiguous blocks; body must only write to slot i of any shared
/// output so results do not depend on the worker count.  The first exception
/// thrown by any worker is rethrown on the calling thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body,
                  std::size_t workers = worker_count());

}  // namespace faultflow
