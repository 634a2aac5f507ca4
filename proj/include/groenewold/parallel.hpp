#pragma once

#include <cstddef>
#include <functional>

namespace groenewold {

// Worker count: GROENEWOLD_THREADS if set and positive, otherwise the
// hardware concurrency (at least 1).
unsigned thread_count();

// Runs body(i) for i in [0, count). Indices are handed out dynamically;
// body must only write to state owned by index i.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace groenewold
