#pragma once

#include <cstddef>
#include <functional>

namespace sahr {

/// Worker count: hardware concurrency, capped by SAHR_THREADS when set.
std::size_t worker_count();

/// Calls fn(i) for i in [0, n), split into contiguous chunks across workers.
/// fn must only write to state owned by index i.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace sahr
