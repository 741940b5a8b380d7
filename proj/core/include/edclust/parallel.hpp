#pragma once

#include <cstddef>
#include <functional>

namespace edclust {

// Maximum number of worker threads used by parallel_for.  0 (default) means
// hardware concurrency.  Thread-count changes never change numeric results:
// callers partition work into fixed-size blocks and reduce in block order.
void set_max_threads(int n);
int max_threads();

// Runs fn(i) for i in [0, count).  Work is handed out block-by-block via an
// atomic cursor; fn must write only to slots it owns.  Nested calls run
// serially in the calling thread.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace edclust
