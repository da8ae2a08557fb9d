#pragma once

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace sddpg {

// Static-schedule parallel loop over independent items. `parallel = false`
// runs the identical body serially; the two paths are the serial reference
// and the OpenMP kernel compared by the benchmark target.
template <class Fn>
void parallel_for(int n, bool parallel, Fn&& fn) {
#if defined(_OPENMP)
#pragma omp parallel for schedule(static) if (parallel)
    for (int i = 0; i < n; ++i) fn(i);
#else
    (void)parallel;
    for (int i = 0; i < n; ++i) fn(i);
#endif
}

inline int max_threads() {
#if defined(_OPENMP)
    return omp_get_max_threads();
#else
    return 1;
#endif
}

}  // namespace sddpg
