#pragma once

#include <cstddef>
#include <functional>

namespace flab {

// Worker count: hardware concurrency capped by FOLIATION_LAB_THREADS when set.
std::size_t worker_count();

// Calls body(i) for i in [0, count) across worker_count() threads. Each index
// runs exactly once; callers write results to slot i, so output order never
// depends on scheduling. The first exception thrown is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace flab
