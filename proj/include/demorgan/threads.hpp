#pragma once

#include <cstddef>
#include <functional>

namespace demorgan {

/// Hardware concurrency, capped by DEMORGAN_GATE_THREADS when set (minimum 1).
unsigned worker_threads();

/// Splits [0, count) into contiguous chunks, one per worker, and runs
/// body(begin, end) on each. Results must not depend on the split.
void parallel_for(std::size_t count, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace demorgan
