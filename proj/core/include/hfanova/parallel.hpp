#pragma once

#include <cstddef>
#include <functional>

namespace hfanova {

/// 0 means one thread per hardware core.
unsigned resolve_threads(unsigned requested);

/// Runs body(i) for i in [0, count) on up to `threads` workers. Results must be
/// written to per-index slots so output never depends on scheduling. The
/// exception from the lowest failing index is rethrown.
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& body);

}  // namespace hfanova
