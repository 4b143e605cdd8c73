#include "bvlab/parallel.hpp"

#include <cstdlib>
#include <string>

namespace bvlab {

int worker_count() {
    const char* s = std::getenv("BVLAB_WORKERS");
    if (s && *s) {
        try {
            int n = std::stoi(s);
            if (n >= 1) return n;
        } catch (...) {
        }
    }
#if defined(_OPENMP)
    return omp_get_max_threads();
#else
    return 1;
#endif
}

void configure_workers() {
#if defined(_OPENMP)
    omp_set_num_threads(worker_count());
#endif
}

}  // namespace bvlab
