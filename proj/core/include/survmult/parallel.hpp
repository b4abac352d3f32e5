#pragma once

#include <cstddef>
#include <functional>

namespace survmult {

// Runs fn(0) ... fn(count-1) on up to `threads` workers. Work items must be
// independent; each writes only its own output slot, so results do not
// depend on the thread count. threads <= 1 runs serially. The first
// exception thrown by any item is rethrown on the caller's thread.
void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)>& fn);

// Resolves a configured thread count: 0 means hardware concurrency.
std::size_t resolve_threads(std::size_t configured);

}  // namespace survmult
