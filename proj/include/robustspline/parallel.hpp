#pragma once

#include <cstddef>
#include <functional>

namespace robustspline {

/// Thread count from an explicit request, else ROBUSTSPLINE_THREADS, else 1.
unsigned resolve_threads(unsigned requested = 0);

/// Runs body(i) for i in [0, count) on up to `threads` workers. Each index is
/// processed exactly once; callers write results to pre-assigned slots so the
/// outcome does not depend on scheduling. The first exception is rethrown.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

} // namespace robustspline
