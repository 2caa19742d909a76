#pragma once

#include <cstddef>
#include <functional>

namespace isq {

// Worker count used by batch operations; 0 selects hardware concurrency.
void set_thread_count(unsigned n);
unsigned thread_count();

// Runs body(i) for i in [0, n). Each index is visited exactly once and results
// must be written to per-index slots, so output does not depend on scheduling.
// The first exception thrown by any worker is rethrown on the caller's thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace isq
