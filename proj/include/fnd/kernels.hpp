#ifndef FND_KERNELS_HPP
#define FND_KERNELS_HPP

#include <cstddef>
#include <cstdint>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fnd::kernels {

// Thread count for the parallel kernels. 1 = run everything on the calling
// thread. The parallel kernels assign each output element to exactly one
// thread and keep the per-element accumulation order fixed, so results are
// bit-identical for every thread count.
int threads();
void set_threads(int n);

inline bool parallel_enabled() { return threads() > 1; }

namespace serial {

// Naive reference implementations. Kept deliberately simple; the optimized
// kernels are tested against these.

template <typename T>
void gemm_nn(const T* a, const T* b, T* c, std::size_t m, std::size_t k, std::size_t n,
             bool accumulate = false) {
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            T acc = accumulate ? c[i * n + j] : T(0);
            for (std::size_t q = 0; q < k; ++q) acc += a[i * k + q] * b[q * n + j];
            c[i * n + j] = acc;
        }
}

template <typename T>
void gemm_nt(const T* a, const T* b, T* c, std::size_t m, std::size_t k, std::size_t n,
             bool accumulate = false) {
    // c[m,n] = a[m,k] * b[n,k]^T
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            T acc = accumulate ? c[i * n + j] : T(0);
            for (std::size_t q = 0; q < k; ++q) acc += a[i * k + q] * b[j * k + q];
            c[i * n + j] = acc;
        }
}

template <typename T>
void gemm_tn(const T* a, const T* b, T* c, std::size_t m, std::size_t k, std::size_t n,
             bool accumulate = false) {
    // c[m,n] = a[k,m]^T * b[k,n]
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            T acc = accumulate ? c[i * n + j] : T(0);
            for (std::size_t q = 0; q < k; ++q) acc += a[q * m + i] * b[q * n + j];
            c[i * n + j] = acc;
        }
}

template <typename T>
void conv1d_forward(const T* x, const T* w, const T* bias, T* y, std::size_t batch,
                    std::size_t len, std::size_t cin, std::size_t ksz, std::size_t cout) {
    // x[b,l,ci], w[kk,ci,co], y[b,t,co], t in [0, len-ksz]
    const std::size_t lout = len - ksz + 1;
    for (std::size_t b = 0; b < batch; ++b)
        for (std::size_t t = 0; t < lout; ++t)
            for (std::size_t co = 0; co < cout; ++co) {
                T acc = bias ? bias[co] : T(0);
                for (std::size_t kk = 0; kk < ksz; ++kk)
                    for (std::size_t ci = 0; ci < cin; ++ci)
                        acc += x[(b * len + t + kk) * cin + ci] * w[(kk * cin + ci) * cout + co];
                y[(b * lout + t) * cout + co] = acc;
            }
}

} // namespace serial

// Optimized kernels. Same contracts as the serial reference; loop order is
// chosen so the innermost stride-1 loop vectorizes and the reduction order
// per output element never depends on the thread count.

template <typename T>
void gemm_nn(const T* a, const T* b, T* c, std::size_t m, std::size_t k, std::size_t n,
             bool accumulate = false) {
    const std::int64_t mm = static_cast<std::int64_t>(m);
#pragma omp parallel for schedule(static) if (parallel_enabled())
    for (std::int64_t i = 0; i < mm; ++i) {
        T* crow = c + i * n;
        if (!accumulate)
            for (std::size_t j = 0; j < n; ++j) crow[j] = T(0);
        for (std::size_t q = 0; q < k; ++q) {
            const T av = a[i * k + q];
            const T* brow = b + q * n;
            for (std::size_t j = 0; j < n; ++j) crow[j] += av * brow[j];
        }
    }
}

template <typename T>
void gemm_nt(const T* a, const T* b, T* c, std::size_t m, std::size_t k, std::size_t n,
             bool accumulate = false) {
    const std::int64_t mm = static_cast<std::int64_t>(m);
#pragma omp parallel for schedule(static) if (parallel_enabled())
    for (std::int64_t i = 0; i < mm; ++i) {
        const T* arow = a + i * k;
        for (std::size_t j = 0; j < n; ++j) {
            const T* brow = b + j * k;
            T acc = accumulate ? c[i * n + j] : T(0);
            for (std::size_t q = 0; q < k; ++q) acc += arow[q] * brow[q];
            c[i * n + j] = acc;
        }
    }
}

template <typename T>
void gemm_tn(const T* a, const T* b, T* c, std::size_t m, std::size_t k, std::size_t n,
             bool accumulate = false) {
    const std::int64_t mm = static_cast<std::int64_t>(m);
#pragma omp parallel for schedule(static) if (parallel_enabled())
    for (std::int64_t i = 0; i < mm; ++i) {
        T* crow = c + i * n;
        if (!accumulate)
            for (std::size_t j = 0; j < n; ++j) crow[j] = T(0);
        for (std::size_t q = 0; q < k; ++q) {
            const T av = a[q * m + i];
            const T* brow = b + q * n;
            for (std::size_t j = 0; j < n; ++j) crow[j] += av * brow[j];
        }
    }
}

template <typename T>
void conv1d_forward(const T* x, const T* w, const T* bias, T* y, std::size_t batch,
                    std::size_t len, std::size_t cin, std::size_t ksz, std::size_t cout) {
    const std::size_t lout = len - ksz + 1;
    const std::int64_t bt = static_cast<std::int64_t>(batch * lout);
#pragma omp parallel for schedule(static) if (parallel_enabled())
    for (std::int64_t i = 0; i < bt; ++i) {
        const std::size_t b = static_cast<std::size_t>(i) / lout;
        const std::size_t t = static_cast<std::size_t>(i) % lout;
        T* yrow = y + (b * lout + t) * cout;
        for (std::size_t co = 0; co < cout; ++co) yrow[co] = bias ? bias[co] : T(0);
        for (std::size_t kk = 0; kk < ksz; ++kk) {
            const T* xrow = x + (b * len + t + kk) * cin;
            const T* wrow = w + kk * cin * cout;
            for (std::size_t ci = 0; ci < cin; ++ci) {
                const T xv = xrow[ci];
                const T* wr = wrow + ci * cout;
                for (std::size_t co = 0; co < cout; ++co) yrow[co] += xv * wr[co];
            }
        }
    }
}

template <typename T>
void conv1d_backward_input(const T* dy, const T* w, T* dx, std::size_t batch, std::size_t len,
                           std::size_t cin, std::size_t ksz, std::size_t cout) {
    const std::size_t lout = len - ksz + 1;
    const std::int64_t bb = static_cast<std::int64_t>(batch);
#pragma omp parallel for schedule(static) if (parallel_enabled())
    for (std::int64_t b = 0; b < bb; ++b) {
        T* dxb = dx + b * len * cin;
        for (std::size_t i = 0; i < len * cin; ++i) dxb[i] = T(0);
        for (std::size_t t = 0; t < lout; ++t) {
            const T* dyrow = dy + (b * lout + t) * cout;
            for (std::size_t kk = 0; kk < ksz; ++kk) {
                T* dxrow = dxb + (t + kk) * cin;
                const T* wrow = w + kk * cin * cout;
                for (std::size_t ci = 0; ci < cin; ++ci) {
                    T acc = T(0);
                    const T* wr = wrow + ci * cout;
                    for (std::size_t co = 0; co < cout; ++co) acc += wr[co] * dyrow[co];
                    dxrow[ci] += acc;
                }
            }
        }
    }
}

template <typename T>
void conv1d_backward_params(const T* x, const T* dy, T* dw, T* db, std::size_t batch,
                            std::size_t len, std::size_t cin, std::size_t ksz,
                            std::size_t cout) {
    const std::size_t lout = len - ksz + 1;
    const std::int64_t kc = static_cast<std::int64_t>(ksz * cin);
#pragma omp parallel for schedule(static) if (parallel_enabled())
    for (std::int64_t i = 0; i < kc; ++i) {
        const std::size_t kk = static_cast<std::size_t>(i) / cin;
        const std::size_t ci = static_cast<std::size_t>(i) % cin;
        T* dwrow = dw + (kk * cin + ci) * cout;
        for (std::size_t co = 0; co < cout; ++co) dwrow[co] = T(0);
        for (std::size_t b = 0; b < batch; ++b)
            for (std::size_t t = 0; t < lout; ++t) {
                const T xv = x[(b * len + t + kk) * cin + ci];
                const T* dyrow = dy + (b * lout + t) * cout;
                for (std::size_t co = 0; co < cout; ++co) dwrow[co] += xv * dyrow[co];
            }
    }
    if (db) {
        for (std::size_t co = 0; co < cout; ++co) db[co] = T(0);
        for (std::size_t b = 0; b < batch; ++b)
            for (std::size_t t = 0; t < lout; ++t) {
                const T* dyrow = dy + (b * lout + t) * cout;
                for (std::size_t co = 0; co < cout; ++co) db[co] += dyrow[co];
            }
    }
}

// db[n] = sum over rows of dy[m,n]
template <typename T>
void col_sum(const T* dy, T* db, std::size_t m, std::size_t n) {
    for (std::size_t j = 0; j < n; ++j) db[j] = T(0);
    for (std::size_t i = 0; i < m; ++i) {
        const T* row = dy + i * n;
        for (std::size_t j = 0; j < n; ++j) db[j] += row[j];
    }
}

} // namespace fnd::kernels

#endif
