#pragma once

#include <cstddef>
#include <functional>

namespace monotone {

/// Worker count: MONOTONE_THREADS if set (>= 1), else hardware concurrency.
int worker_count();

/// Runs body(i) for i in [0, count) on up to worker_count() threads. Results
/// must be written to index-addressed storage so ordering is deterministic.
/// If several iterations throw, the exception of the lowest index is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace monotone
