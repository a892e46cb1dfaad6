#pragma once

#include <cstddef>
#include <functional>

namespace texref {

/// Worker count: TEXREF_THREADS when set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
unsigned worker_count();

/// Calls fn(i) for every i in [0, count) across worker_count() threads. After a
/// failure no new indices are started; the exception from the lowest failing
/// index is rethrown once all workers stop.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace texref
