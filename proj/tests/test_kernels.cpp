#include <doctest.h>

#include <vector>

#include "fnd/kernels.hpp"
#include "fnd/rng.hpp"

using namespace fnd;

namespace {

// integer-valued floats: every accumulation order is exact, so the
// optimized kernels must agree with the naive reference bit for bit
std::vector<float> random_ints(std::size_t n, Rng& rng) {
    std::vector<float> v(n);
    for (auto& x : v) x = static_cast<float>(static_cast<int>(rng.below(17)) - 8);
    return v;
}

std::vector<float> random_reals(std::size_t n, Rng& rng) {
    std::vector<float> v(n);
    for (auto& x : v) x = static_cast<float>(rng.uniform(-1.0, 1.0));
    return v;
}

} // namespace

TEST_CASE("gemm variants match the serial reference exactly on integer data") {
    Rng rng(11);
    for (int iter = 0; iter < 20; ++iter) {
        const std::size_t m = 1 + rng.below(9), k = 1 + rng.below(9), n = 1 + rng.below(9);
        auto a = random_ints(m * k, rng);
        auto b = random_ints(k * n, rng);
        std::vector<float> c1(m * n), c2(m * n);

        kernels::serial::gemm_nn(a.data(), b.data(), c1.data(), m, k, n);
        kernels::gemm_nn(a.data(), b.data(), c2.data(), m, k, n);
        CHECK(c1 == c2);

        auto bt = random_ints(n * k, rng);
        kernels::serial::gemm_nt(a.data(), bt.data(), c1.data(), m, k, n);
        kernels::gemm_nt(a.data(), bt.data(), c2.data(), m, k, n);
        CHECK(c1 == c2);

        auto at = random_ints(k * m, rng);
        kernels::serial::gemm_tn(at.data(), b.data(), c1.data(), m, k, n);
        kernels::gemm_tn(at.data(), b.data(), c2.data(), m, k, n);
        CHECK(c1 == c2);
    }
}

TEST_CASE("gemm accumulate flag adds on top of existing values") {
    Rng rng(5);
    auto a = random_ints(6, rng);  // 2x3
    auto b = random_ints(12, rng); // 3x4
    std::vector<float> c(8, 10.0f), expect(8, 0.0f);
    kernels::gemm_nn(a.data(), b.data(), expect.data(), 2, 3, 4);
    for (auto& x : expect) x += 10.0f;
    kernels::gemm_nn(a.data(), b.data(), c.data(), 2, 3, 4, true);
    CHECK(c == expect);
}

TEST_CASE("thread count does not change kernel results") {
    Rng rng(23);
    const std::size_t m = 33, k = 47, n = 29;
    auto a = random_reals(m * k, rng);
    auto b = random_reals(k * n, rng);
    std::vector<float> c1(m * n), c4(m * n);

    kernels::set_threads(1);
    kernels::gemm_nn(a.data(), b.data(), c1.data(), m, k, n);
    kernels::set_threads(4);
    kernels::gemm_nn(a.data(), b.data(), c4.data(), m, k, n);
    kernels::set_threads(1);
    CHECK(c1 == c4); // bitwise: each output element keeps its reduction order
}

TEST_CASE("conv1d forward matches the serial reference") {
    Rng rng(31);
    for (int iter = 0; iter < 10; ++iter) {
        const std::size_t ksz = 2 + rng.below(4);
        const std::size_t batch = 1 + rng.below(3), len = ksz + rng.below(7);
        const std::size_t cin = 1 + rng.below(4), cout = 1 + rng.below(5);
        auto x = random_ints(batch * len * cin, rng);
        auto w = random_ints(ksz * cin * cout, rng);
        auto bias = random_ints(cout, rng);
        const std::size_t lout = len - ksz + 1;
        std::vector<float> y1(batch * lout * cout), y2(y1.size());
        kernels::serial::conv1d_forward(x.data(), w.data(), bias.data(), y1.data(), batch,
                                        len, cin, ksz, cout);
        kernels::conv1d_forward(x.data(), w.data(), bias.data(), y2.data(), batch, len, cin,
                                ksz, cout);
        CHECK(y1 == y2);

        kernels::set_threads(3);
        std::vector<float> y3(y1.size());
        kernels::conv1d_forward(x.data(), w.data(), bias.data(), y3.data(), batch, len, cin,
                                ksz, cout);
        kernels::set_threads(1);
        CHECK(y1 == y3);
    }
}

TEST_CASE("conv1d window-sum and delta-kernel identities") {
    // all-ones kernel over an all-ones input sums the window
    std::vector<float> x(5, 1.0f), w(5, 1.0f), y(1);
    const float* no_bias = nullptr;
    kernels::conv1d_forward(x.data(), w.data(), no_bias, y.data(), 1, 5, 1, 5, 1);
    CHECK(y[0] == doctest::Approx(5.0f));

    // delta kernel at tap 0 copies the input prefix
    std::vector<float> x2 = {3, 1, 4, 1, 5, 9, 2};
    std::vector<float> w2 = {1, 0, 0};
    std::vector<float> y2(5);
    kernels::conv1d_forward(x2.data(), w2.data(), no_bias, y2.data(), 1, 7, 1, 3, 1);
    CHECK(y2 == std::vector<float>{3, 1, 4, 1, 5});
}
