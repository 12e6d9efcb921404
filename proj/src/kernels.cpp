#include "fnd/kernels.hpp"

namespace fnd::kernels {

namespace {
int g_threads = 1;
}

int threads() { return g_threads; }

void set_threads(int n) {
    g_threads = n < 1 ? 1 : n;
#ifdef _OPENMP
    omp_set_num_threads(g_threads);
#endif
}

} // namespace fnd::kernels
