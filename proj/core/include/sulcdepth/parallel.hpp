#pragma once

#include <functional>

namespace sulcdepth {

/// Worker count: SULCDEPTH_THREADS when set to a positive integer, otherwise
/// the hardware concurrency (at least 1).
int thread_count();

/// Runs fn(0..n-1) across the worker pool and blocks until every call
/// returns. Work items must be independent; the first exception thrown by
/// any item is rethrown here after all workers stop picking up new items.
void parallel_for(int n, const std::function<void(int)>& fn);

}  // namespace sulcdepth
