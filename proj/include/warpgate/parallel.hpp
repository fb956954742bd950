#pragma once

#include <cstddef>
#include <functional>

namespace warpgate {

/// Worker count from WARPGATE_THREADS (0 or unset = hardware concurrency).
unsigned worker_count();

/// Runs body(i) for i in [0, count). Each index is visited exactly once; the
/// body must only write state owned by its index.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace warpgate
