#pragma once

#include <cmath>
#include <cstdint>

namespace eidlab {

// Counter-based generator: output j is mix64(seed + j * phi64) where mix64 is
// the SplitMix64 finalizer. Any draw is a pure function of (seed, counter), so
// substreams fork cheaply and parallel partitions stay reproducible.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t counter = 0)
        : seed_(seed), counter_(counter) {}

    static std::uint64_t mix64(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xbf58476d1ce4e5b9ULL;
        z ^= z >> 27;
        z *= 0x94d049bb133111ebULL;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t next_u64() {
        std::uint64_t z = seed_ + (counter_++) * 0x9e3779b97f4a7c15ULL;
        return mix64(z);
    }

    // Uniform in [0, 1) with 53 random bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    // Uniform integer in [0, n), n > 0. Modulo bias is irrelevant at desk scale.
    std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

    // Standard normal via Box-Muller (polar-free form; uses two uniforms).
    double next_normal();

    // Independent substream labelled by id; draws never collide with the parent
    // because the seed itself is re-mixed.
    CounterRng fork(std::uint64_t id) const {
        return CounterRng(mix64(seed_ ^ mix64(id + 0x632be59bd9b4e019ULL)));
    }

private:
    std::uint64_t seed_;
    std::uint64_t counter_;
};

inline double CounterRng::next_normal() {
    double u1 = next_double();
    while (u1 <= 0.0) u1 = next_double();
    double u2 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

}  // namespace eidlab
