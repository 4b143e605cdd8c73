#pragma once

#include <cstddef>
#include <exception>
#include <vector>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace bvlab {

// Worker count from BVLAB_WORKERS (unset or invalid -> OpenMP default).
int worker_count();
// Apply worker_count() to the OpenMP runtime; call once at program start.
void configure_workers();

enum class Exec { serial, parallel };

// out[i] = f(i) for i < n.  Each slot is written by exactly one iteration, so
// the result does not depend on the worker count or the schedule.  The serial
// path is the reference the parallel path is tested against.
template <class T, class F>
std::vector<T> ordered_map(std::size_t n, F&& f, Exec exec = Exec::parallel) {
    std::vector<T> out(n);
    if (exec == Exec::serial || n < 2) {
        for (std::size_t i = 0; i < n; ++i) out[i] = f(i);
        return out;
    }
    std::exception_ptr err = nullptr;
#pragma omp parallel for schedule(dynamic, 1)
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
        try {
            out[static_cast<std::size_t>(i)] = f(static_cast<std::size_t>(i));
        } catch (...) {
#pragma omp critical(bvlab_ordered_map_err)
            if (!err) err = std::current_exception();
        }
    }
    if (err) std::rethrow_exception(err);
    return out;
}

}  // namespace bvlab
