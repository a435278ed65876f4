#pragma once

#include <cstddef>
#include <functional>

namespace cutloci {

/// Worker count: CUTLOCI_THREADS if set to a positive integer, otherwise the
/// hardware concurrency (0 or unset means automatic).
unsigned worker_count();

/// Runs body(i) for every i in [0, count). Iterations must write only to their
/// own slot of pre-sized output, which keeps results independent of the
/// schedule. The first exception thrown by any iteration is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace cutloci
