#pragma once

#include <cstddef>
#include <functional>

namespace thermo {

// Worker count from THERMOLAB_WORKERS, else hardware concurrency.
int default_worker_count();

// Runs body(i) for i in [0, n). Tasks are distributed dynamically but each
// index is processed exactly once, so any scheme that writes result i into
// slot i is deterministic in the worker count. Exceptions from tasks are
// rethrown on the calling thread (first one wins).
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& body);

}  // namespace thermo
