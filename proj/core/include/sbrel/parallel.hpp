#pragma once

#include <cstddef>
#include <functional>

namespace sbrel {

/// Calls body(i) for i in [0, count) on up to `workers` threads (0 = hardware
/// concurrency). Indices are claimed dynamically; callers write results into
/// slot i so the outcome does not depend on scheduling. The first exception
/// thrown by any body is rethrown after all threads join.
void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& body);

}  // namespace sbrel
