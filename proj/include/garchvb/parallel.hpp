#pragma once

#include <functional>

namespace garchvb {

/// Runs body(i) for i in [0, n) across up to num_threads workers.
/// Iterations must be independent; exceptions from workers are rethrown on the
/// calling thread. num_threads <= 1 runs inline.
void parallel_for(int n, int num_threads, const std::function<void(int)>& body);

/// Hardware concurrency clamped to [1, 64].
int default_thread_count();

}  // namespace garchvb
