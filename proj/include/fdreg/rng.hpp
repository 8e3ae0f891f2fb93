#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace fdreg {

/// Seeded random stream with samplers that are bit-reproducible across
/// platforms (mt19937_64 output is standard-mandated; the transforms below
/// avoid the implementation-defined std::*_distribution classes).
class RandomStream {
public:
    explicit RandomStream(uint64_t seed) : engine_(mix(seed)) {}

    /// Independent substream, e.g. one per bootstrap replicate or fold.
    static RandomStream derive(uint64_t seed, uint64_t stream) {
        return RandomStream(mix(seed) ^ mix(0x9e3779b97f4a7c15ULL + stream));
    }

    double uniform() { return (engine_() >> 11) * 0x1.0p-53; }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 0.0, u2;
        while (u1 <= 0.0) u1 = uniform();
        u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(2.0 * M_PI * u2);
        have_spare_ = true;
        return r * std::cos(2.0 * M_PI * u2);
    }

    /// Sequential-search inversion; fine for the count rates used here.
    long poisson(double rate) {
        if (rate <= 0.0) return 0;
        long k = 0;
        double p = std::exp(-rate), cdf = p, u = uniform();
        while (u > cdf && k < 100000) {
            ++k;
            p *= rate / k;
            cdf += p;
        }
        return k;
    }

    /// +1 or -1 with equal probability.
    double rademacher() { return uniform() < 0.5 ? -1.0 : 1.0; }

    /// Mammen's two-point multiplier law (mean 0, variance 1).
    double mammen() {
        static const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
        static const double p_neg = golden / std::sqrt(5.0);
        return uniform() < p_neg ? 1.0 - golden : golden;
    }

    uint64_t bits() { return engine_(); }

private:
    static uint64_t mix(uint64_t x) {  // splitmix64 finalizer
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace fdreg
