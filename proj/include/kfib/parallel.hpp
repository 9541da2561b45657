#pragma once

#include <cstddef>
#include <functional>

namespace kfib {

/* Worker count: KFIB_WORKERS if set and positive, else hardware concurrency. */
unsigned worker_count();

/* Calls fn(i) for 0 <= i < n on worker_count() threads.  The first exception
 * thrown by any call is rethrown after all workers stop. */
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace kfib
