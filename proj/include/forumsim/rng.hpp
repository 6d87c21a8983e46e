#pragma once

#include <array>
#include <cstdint>
#include <random>

namespace forumsim {

// Thin wrapper over std::mt19937_64 with hand-rolled variate mappings so
// draws are identical across standard-library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next() { return gen_(); }

    // Uniform double in [0, 1) with 53 random bits.
    double u01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, n); n > 0. Rejection-free would bias for huge
    // n; the plain rejection loop below is exact.
    std::uint64_t bounded(std::uint64_t n) {
        const std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            const std::uint64_t r = gen_();
            if (r >= threshold) return r % n;
        }
    }

    bool bernoulli(double p) { return u01() < p; }

    // Index 0, 1 or 2 according to a 3-way probability mix.
    int pick3(const std::array<double, 3>& mix) {
        const double u = u01();
        if (u < mix[0]) return 0;
        if (u < mix[0] + mix[1]) return 1;
        return 2;
    }

private:
    std::mt19937_64 gen_;
};

// SplitMix64 finalizer; used to derive independent substream seeds.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Deterministic per-purpose substream seed: stream 0 is reserved for
// population setup, stream t+1 drives thread t.
inline std::uint64_t substream_seed(std::uint64_t master, std::uint64_t stream) {
    return mix64(master ^ mix64(stream));
}

}  // namespace forumsim
