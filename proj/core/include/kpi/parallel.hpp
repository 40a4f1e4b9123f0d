#pragma once

#include <cstddef>
#include <functional>

namespace kpi {

/// Worker count used by parallel_for; defaults to hardware concurrency.
void set_thread_count(unsigned n);
unsigned thread_count();

/// Calls fn(i) for i in [0, n) on up to thread_count() threads. Each index is
/// handled exactly once; the first exception thrown is rethrown after all
/// workers have joined.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace kpi
