#ifndef ESGM_RNG_HPP
#define ESGM_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace esgm {

// splitmix64 step; used to derive independent sub-stream seeds from a
// base seed plus stable integer keys.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t key) {
    return splitmix64(base ^ splitmix64(key));
}

// mt19937_64 with hand-rolled variate transforms. The standard pins down
// the engine bit-for-bit but not the distributions, so the transforms
// live here to keep seeded runs reproducible across toolchains.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // Uniform on [0, 1) with 53-bit resolution.
    double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Uniform on {0, 1, ..., n-1} via rejection.
    int uniform_int(int n) {
        const std::uint64_t bound = ~std::uint64_t{0} - (~std::uint64_t{0} % static_cast<std::uint64_t>(n));
        std::uint64_t v;
        do {
            v = gen_();
        } while (v >= bound);
        return static_cast<int>(v % static_cast<std::uint64_t>(n));
    }

    double exponential() { return -std::log1p(-uniform01()); }

    // Marsaglia polar method, no cached spare.
    double normal() {
        for (;;) {
            const double u = 2.0 * uniform01() - 1.0;
            const double v = 2.0 * uniform01() - 1.0;
            const double s = u * u + v * v;
            if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
        }
    }

    // Uniform draw from the standard 3-simplex in R^4 (flat Dirichlet):
    // four iid exponentials, normalized.
    Eigen::Vector4d simplex_point() {
        Eigen::Vector4d g;
        for (int i = 0; i < 4; ++i) g[i] = exponential();
        return g / g.sum();
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (int i = static_cast<int>(v.size()) - 1; i > 0; --i) {
            std::swap(v[static_cast<std::size_t>(i)], v[static_cast<std::size_t>(uniform_int(i + 1))]);
        }
    }

  private:
    std::mt19937_64 gen_;
};

}  // namespace esgm

#endif  // ESGM_RNG_HPP
