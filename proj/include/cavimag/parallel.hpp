#pragma once

#include <cstddef>

namespace cavimag {

/// Minimum cell count before a kernel is split across workers.
inline constexpr std::size_t kParallelGrain = 64;

/// Runs f(i) for i in [0, n). Each index is handled by exactly one worker and
/// f must only write to slot i of its outputs, which keeps results independent
/// of the worker count.
template <class F>
void parallel_for(std::size_t n, int threads, F&& f) {
    if (threads <= 1 || n < kParallelGrain) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    const auto count = static_cast<long long>(n);
#pragma omp parallel for num_threads(threads) schedule(static)
    for (long long i = 0; i < count; ++i) f(static_cast<std::size_t>(i));
}

}  // namespace cavimag
