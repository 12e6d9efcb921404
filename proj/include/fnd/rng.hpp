#ifndef FND_RNG_HPP
#define FND_RNG_HPP

#include <cmath>
#include <cstdint>
#include <cstddef>
#include <string_view>
#include <vector>

namespace fnd {

// splitmix64: tiny, fast, and identical on every platform. All randomness
// in the project flows through this so runs are reproducible bit for bit.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0,1)
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // uniform integer in [0,n)
    std::uint64_t below(std::uint64_t n) { return n ? next() % n : 0; }

    bool bernoulli(double p) { return uniform() < p; }

    // standard normal via Box-Muller (two draws per call, no caching)
    double normal() {
        double u1 = uniform();
        double u2 = uniform();
        if (u1 < 1e-300) u1 = 1e-300;
        constexpr double two_pi = 6.283185307179586;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
    }

private:
    std::uint64_t state_;
};

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Stable seed derivation for independent sub-streams (grid cells, per-doc
// inference, dropout masks). Mixing through splitmix decorrelates seeds that
// differ in one bit.
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view key) {
    Rng r(master ^ fnv1a64(key));
    return r.next();
}

template <typename T>
void shuffle(std::vector<T>& xs, Rng& rng) {
    for (std::size_t i = xs.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(rng.below(i));
        std::swap(xs[i - 1], xs[j]);
    }
}

} // namespace fnd

#endif
