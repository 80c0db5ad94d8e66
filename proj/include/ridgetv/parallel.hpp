#pragma once

#include <cstddef>
#include <functional>

namespace ridgetv {

/// Caps the worker count used by parallel_for; 0 restores the default
/// (hardware concurrency). RIDGE_TV_THREADS, when set, wins over both.
void set_max_threads(int n);
int max_threads();

/// Calls body(i) for i in [0, n). Each index is handled by exactly one
/// worker; callers write results per index and reduce sequentially, so the
/// outcome does not depend on the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace ridgetv
