#pragma once

#include <cstddef>
#include <functional>

namespace topoderiv {

/// Hardware concurrency capped by TOPODERIV_THREADS (if set and positive).
int worker_count();

/// Runs body(i) for i in [0, n) on up to worker_count() threads. Work items
/// are claimed dynamically; results must be written to per-index slots so
/// the outcome does not depend on scheduling. The first exception thrown is
/// rethrown after all workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace topoderiv
