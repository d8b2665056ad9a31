#pragma once

#include <cstddef>
#include <functional>

namespace kahler {

/// Runs body(i) for i in [0, count) on a transient pool of worker threads.
/// Calls nested inside a running parallel_for execute serially on the
/// calling worker. Results must be written to per-index slots so that the
/// caller's reduction order does not depend on scheduling.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

// Worker count; honours KAHLER_THREADS when set to a positive integer.
std::size_t worker_count();

}  // namespace kahler
