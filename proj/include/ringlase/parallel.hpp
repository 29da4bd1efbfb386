#pragma once

#include <cstddef>
#include <functional>

namespace ringlase {

/// Worker count: hardware concurrency, capped by RINGLASE_THREADS when set.
unsigned thread_count();

/// Runs body(i) for i in [0, n). Each index is visited exactly once; the
/// assignment of indices to threads is static, so results written per index
/// are independent of scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace ringlase
