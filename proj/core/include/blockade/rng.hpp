#ifndef BLOCKADE_RNG_HPP
#define BLOCKADE_RNG_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace blockade {

/// Seeded random stream with hand-rolled variate transforms. std::mt19937_64
/// output is specified bit-exactly by the standard, but the distribution
/// adaptors are not; doing the uniform/Box-Muller transforms here keeps
/// streams identical across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    /// Uniform in [0, 1) with 53-bit resolution.
    double uniform() {
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller (two draws per call, no caching).
    double normal() {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(6.283185307179586476925286766559 * u2);
    }

    std::complex<double> normal_complex() {
        double re = normal();
        double im = normal();
        return {re, im};
    }

    /// Uniform integer in [0, n).
    int index(int n) { return static_cast<int>(uniform() * n) % n; }

private:
    std::mt19937_64 eng_;
};

} // namespace blockade

#endif
