#pragma once

#include <cstddef>
#include <functional>

namespace rydpmp {

/// Worker count: PMP_PULSE_THREADS if set to a positive integer, else the hardware concurrency.
int thread_count();

/// Runs fn(i) for i in [0, n) on up to thread_count() threads. Results must be written to
/// index-addressed storage so the outcome does not depend on scheduling. The first exception
/// thrown by any task is rethrown after all workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace rydpmp
