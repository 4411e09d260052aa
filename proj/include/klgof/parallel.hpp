#pragma once

#include <cstdint>
#include <exception>
#include <utility>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace klgof {

// Execution mode for the data-parallel kernels. Serial is the reference
// path; Parallel distributes iterations across OpenMP threads. Both paths
// produce bit-identical results because every iteration writes only its
// own output slots and all reductions happen afterwards in index order.
enum class ExecMode { Serial, Parallel };

inline int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

// Invokes fn(i) for i in [0, n). Exceptions thrown by iterations are
// captured and rethrown on the calling thread (first one wins).
template <typename Fn>
void parallel_for(std::int64_t n, ExecMode mode, Fn&& fn) {
    if (mode == ExecMode::Parallel && n > 1) {
        std::exception_ptr error = nullptr;
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
        for (std::int64_t i = 0; i < n; ++i) {
            try {
                fn(i);
            } catch (...) {
#ifdef _OPENMP
#pragma omp critical(klgof_parallel_for_error)
#endif
                {
                    if (!error) error = std::current_exception();
                }
            }
        }
        if (error) std::rethrow_exception(error);
    } else {
        for (std::int64_t i = 0; i < n; ++i) fn(i);
    }
}

}  // namespace klgof
