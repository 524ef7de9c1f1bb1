#pragma once

#include <cstdint>
#include <functional>

namespace oplab::par {

// Worker count: OPLAB_THREADS if set (>= 1), otherwise the OpenMP default.
// Thread count affects wall time only: every parallel loop in this codebase
// either writes per-index slots or reduces through an associative and
// commutative combine, so results are bit-identical for any schedule.
int effective_threads();

// Runs body(i) for i in [0, n). Body must not rely on execution order.
void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& body);

// Same, but also passes a worker id in [0, effective_threads()) so callers
// can keep per-thread reduction slots.
void parallel_for_tid(std::int64_t n,
                      const std::function<void(std::int64_t, int)>& body);

}  // namespace oplab::par
