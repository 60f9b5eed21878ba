#pragma once

/**
 * Deterministic work sharing across threads.
 *
 * parallel_for splits [0, n) into contiguous chunks, one per worker. Callers
 * must write only to disjoint output slots indexed by the loop variable; all
 * reductions happen serially outside. Results are then byte-identical for any
 * thread count. The worker count comes from the CYLSTOKES_THREADS environment
 * variable (default 1), re-read on every call so tests can vary it in-process.
 */

#include <functional>

namespace cylstokes {

int thread_count();

void parallel_for(int n, const std::function<void(int)>& body);

}  // namespace cylstokes
