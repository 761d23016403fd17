#pragma once

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

// Parallel loop helpers. Every parallel kernel in this project is a gather:
// each output element is written by exactly one iteration, with a fixed
// arithmetic order inside the iteration, so results are bit-identical to the
// serial reference no matter the thread count. Scalar reductions stay serial.
namespace dfluid::par {

inline int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

template <class F>
void serial_for(std::ptrdiff_t n, F&& body) {
    for (std::ptrdiff_t i = 0; i < n; ++i) body(i);
}

template <class F>
void parallel_for(std::ptrdiff_t n, F&& body) {
#ifdef _OPENMP
    if (n > 512 && omp_get_max_threads() > 1) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < n; ++i) body(i);
        return;
    }
#endif
    serial_for(n, body);
}

}  // namespace dfluid::par
