#pragma once

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace ldp::mc {

// Counter-addressable stream family: replication i always sees the same
// stream for a given master seed, independent of thread scheduling.
struct SplitMix64 {
    std::uint64_t x;
    std::uint64_t next() {
        std::uint64_t z = (x += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
};

class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) {
        SplitMix64 sm{seed};
        for (auto& w : s_) w = sm.next();
        if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 0x9E3779B97F4A7C15ULL;
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = std::rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = std::rotl(s_[3], 45);
        return result;
    }

    // Uniform on the open interval (0, 1).
    double next_unit() { return (double(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

    double next_exponential() { return -std::log(next_unit()); }

    double next_normal() {
        const double r = std::sqrt(2.0 * next_exponential());
        return r * std::cos(2.0 * std::numbers::pi * next_unit());
    }

    std::uint64_t next_poisson(double lambda);

    // Geometric on {1, 2, ...} with success probability p.
    std::uint64_t next_geometric_ge1(double p) {
        if (p >= 1.0) return 1;
        const double g = std::floor(std::log(next_unit()) / std::log1p(-p));
        if (g >= 9.2e18) return 9200000000000000000ULL;
        return 1 + std::uint64_t(g);
    }

private:
    std::array<std::uint64_t, 4> s_;

    std::uint64_t poisson_small(double lambda) {
        const double limit = std::exp(-lambda);
        std::uint64_t k = 0;
        double prod = next_unit();
        while (prod > limit) {
            ++k;
            prod *= next_unit();
        }
        return k;
    }

    std::uint64_t poisson_ptrd(double lambda);
};

struct SeedSpec {
    std::uint64_t master_seed = 1;

    RandomStream stream_for(std::uint64_t replication_index) const {
        SplitMix64 sm{master_seed ^ (replication_index * 0xD1342543DE82EF95ULL + 0x632BE59BD9B4E019ULL)};
        return RandomStream(sm.next());
    }
};

inline std::uint64_t RandomStream::poisson_ptrd(double lambda) {
    const double log_lambda = std::log(lambda);
    const double b = 0.931 + 2.53 * std::sqrt(lambda);
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);
    for (;;) {
        const double u = next_unit() - 0.5;
        const double v = next_unit();
        const double us = 0.5 - std::abs(u);
        const double kd = std::floor((2.0 * a / us + b) * u + lambda + 0.43);
        if (us >= 0.07 && v <= v_r) return std::uint64_t(kd);
        if (kd < 0.0 || (us < 0.013 && v > us)) continue;
        if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
            kd * log_lambda - lambda - std::lgamma(kd + 1.0))
            return std::uint64_t(kd);
    }
}

inline std::uint64_t RandomStream::next_poisson(double lambda) {
    if (lambda <= 0.0) return 0;
    if (lambda < 10.0) return poisson_small(lambda);
    return poisson_ptrd(lambda);
}

}  // namespace ldp::mc
