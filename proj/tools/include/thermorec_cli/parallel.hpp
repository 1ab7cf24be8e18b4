#pragma once

#include <cstddef>
#include <functional>

namespace thermorec::cli {

/// Runs body(i) for i in [0, n) on up to `threads` workers (0 = hardware
/// concurrency). Callers write results into slot i, so the reduction order
/// never depends on scheduling. The first exception thrown by a body is
/// rethrown after all workers finish.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body);

}  // namespace thermorec::cli
