#pragma once

#include <cstddef>
#include <functional>

namespace flagcert {

/// Runs body(i) for every i in [0, count) on up to `threads` worker threads.
/// Each index is visited exactly once; callers write only to slot i, so the
/// result never depends on the thread count. Exceptions from body are
/// rethrown on the calling thread (the first one wins).
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

/// Thread count from FLAGCERT_THREADS, or 1 when unset or malformed.
unsigned threads_from_environment();

}  // namespace flagcert
