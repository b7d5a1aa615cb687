#ifndef WHITHAM_PARALLEL_HPP
#define WHITHAM_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace whitham {

/// Worker cap: min(hardware_concurrency, WHITHAM_THREADS). The env var is
/// read once per process.
int thread_cap();

/// Static-partition parallel loop over [0, n). The body must write only to
/// per-index slots; results are then independent of the thread count, which
/// keeps runs bit-reproducible.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

} // namespace whitham

#endif
