// Compares the naive serial reference kernels with the optimized OpenMP
// kernels at a few training-relevant shapes. Run with a thread count:
//   bench_kernels [threads]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <vector>

#include "fnd/kernels.hpp"
#include "fnd/rng.hpp"

namespace {

using clock_type = std::chrono::steady_clock;

double ms_since(clock_type::time_point t0) {
    return std::chrono::duration<double, std::milli>(clock_type::now() - t0).count();
}

std::vector<float> random_vec(std::size_t n, fnd::Rng& rng) {
    std::vector<float> v(n);
    for (auto& x : v) x = static_cast<float>(rng.uniform(-1.0, 1.0));
    return v;
}

template <typename F>
double time_best_of(int reps, F&& fn) {
    double best = 1e30;
    for (int r = 0; r < reps; ++r) {
        auto t0 = clock_type::now();
        fn();
        best = std::min(best, ms_since(t0));
    }
    return best;
}

void bench_gemm(std::size_t m, std::size_t k, std::size_t n, fnd::Rng& rng) {
    std::vector<float> a = random_vec(m * k, rng);
    std::vector<float> b = random_vec(k * n, rng);
    std::vector<float> c(m * n), c_ref(m * n);

    const double serial_ms = time_best_of(3, [&] {
        fnd::kernels::serial::gemm_nn(a.data(), b.data(), c_ref.data(), m, k, n);
    });
    const double opt_ms = time_best_of(3, [&] {
        fnd::kernels::gemm_nn(a.data(), b.data(), c.data(), m, k, n);
    });

    double max_diff = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i)
        max_diff = std::max(max_diff, static_cast<double>(std::abs(c[i] - c_ref[i])));

    const double gmacs = static_cast<double>(m) * k * n / 1e9;
    std::printf("gemm   %5zux%5zux%5zu  serial %8.2f ms (%5.2f G/s)  omp[%d] %8.2f ms "
                "(%5.2f G/s)  speedup %4.2fx  max|diff| %.2e\n",
                m, k, n, serial_ms, gmacs / (serial_ms / 1e3), fnd::kernels::threads(), opt_ms,
                gmacs / (opt_ms / 1e3), serial_ms / opt_ms, max_diff);
}

void bench_conv(std::size_t batch, std::size_t len, std::size_t cin, std::size_t cout,
                fnd::Rng& rng) {
    const std::size_t ksz = 5;
    std::vector<float> x = random_vec(batch * len * cin, rng);
    std::vector<float> w = random_vec(ksz * cin * cout, rng);
    std::vector<float> bias = random_vec(cout, rng);
    const std::size_t lout = len - ksz + 1;
    std::vector<float> y(batch * lout * cout), y_ref(y.size());

    const double serial_ms = time_best_of(3, [&] {
        fnd::kernels::serial::conv1d_forward(x.data(), w.data(), bias.data(), y_ref.data(),
                                             batch, len, cin, ksz, cout);
    });
    const double opt_ms = time_best_of(3, [&] {
        fnd::kernels::conv1d_forward(x.data(), w.data(), bias.data(), y.data(), batch, len,
                                     cin, ksz, cout);
    });

    double max_diff = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i)
        max_diff = std::max(max_diff, static_cast<double>(std::abs(y[i] - y_ref[i])));

    const double gmacs = static_cast<double>(batch) * lout * cout * ksz * cin / 1e9;
    std::printf("conv1d B%zu L%5zu %3zu->%3zu  serial %8.2f ms (%5.2f G/s)  omp[%d] %8.2f ms "
                "(%5.2f G/s)  speedup %4.2fx  max|diff| %.2e\n",
                batch, len, cin, cout, serial_ms, gmacs / (serial_ms / 1e3),
                fnd::kernels::threads(), opt_ms, gmacs / (opt_ms / 1e3), serial_ms / opt_ms,
                max_diff);
}

} // namespace

int main(int argc, char** argv) {
    int threads = 1;
    if (argc > 1) threads = std::atoi(argv[1]);
    fnd::kernels::set_threads(threads);
    fnd::Rng rng(7);

    std::printf("kernel benchmark, %d thread(s)\n", threads);
    bench_gemm(32, 5000, 1024, rng);
    bench_gemm(32, 1024, 512, rng);
    bench_gemm(32, 400, 200, rng);
    bench_conv(32, 1000, 1, 128, rng);
    bench_conv(32, 996, 128, 64, rng);
    bench_conv(8, 300, 64, 128, rng);
    return 0;
}
