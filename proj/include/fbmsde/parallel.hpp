#pragma once

#include <cstdint>
#include <functional>

namespace fbmsde {

/// Worker count: FBMSDE_THREADS when set (>= 1), hardware concurrency
/// otherwise. Never affects numerical results; it only slices work.
int resolve_thread_count();

/// Runs fn(i) for i in [0, count) across worker threads. Each invocation
/// must be pure given i (results written to preallocated slots), so the
/// outcome is independent of scheduling. Exceptions are captured and the
/// first one (lowest index) is rethrown on the caller thread.
void parallel_for_paths(std::int64_t count, const std::function<void(std::int64_t)>& fn);

} // namespace fbmsde
