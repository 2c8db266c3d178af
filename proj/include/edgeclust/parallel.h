#pragma once

#include <cstddef>
#include <functional>

namespace edgeclust {

// Worker count: hardware concurrency capped by EDGECLUST_THREADS when set.
unsigned worker_count();

// Runs body(begin, end) over contiguous chunks of [0, n). Every index is
// visited exactly once; callers write only to index-owned slots so results
// do not depend on the number of workers. The first exception thrown by a
// chunk is rethrown after all workers finish.
void parallel_for(std::size_t n,
                  const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace edgeclust
