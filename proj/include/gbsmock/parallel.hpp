#pragma once

#include <cstddef>
#include <functional>

namespace gbsmock {

/// Worker count: GBSMOCK_THREADS when set and positive, otherwise the
/// hardware concurrency (at least 1).
unsigned worker_count();

/// Runs body(i) for i in [0, n) on up to worker_count() threads. Work is handed
/// out by index, so callers that write results into slot i get the same output
/// for any thread count. The first exception thrown by any body is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace gbsmock
