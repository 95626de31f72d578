// parallel.hpp — OpenMP loop that carries exceptions out of the parallel region

#pragma once

#include <cstddef>
#include <exception>

namespace xblockade::detail {

/// Calls fn(i) for i in [0, n) across OpenMP threads. An exception thrown by
/// any iteration is rethrown on the calling thread after the loop ends.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn)
{
    std::exception_ptr first;
#pragma omp parallel for schedule(dynamic, 8)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
        try {
            fn(static_cast<std::size_t>(i));
        } catch (...) {
#pragma omp critical(xblockade_parallel_for)
            if (!first) first = std::current_exception();
        }
    }
    if (first) std::rethrow_exception(first);
}

} // namespace xblockade::detail
