#pragma once

#include <cstddef>
#include <functional>

namespace nhlc {

/// Runs fn(0..count−1) on up to `workers` threads. Each index runs exactly once; callers
/// write results into per-index slots, so output never depends on scheduling. If any
/// call throws, the exception of the lowest failing index is rethrown after all finish.
void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& fn);

}  // namespace nhlc
