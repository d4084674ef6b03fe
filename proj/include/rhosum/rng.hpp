#pragma once

#include <cstdint>
#include <random>

namespace rhosum {

/// Deterministic RNG wrapper. The engine is mt19937_64 (its output is
/// pinned by the standard); bounded draws and unit doubles are done here
/// rather than through std distributions, whose exact output differs
/// across standard libraries.
class Rng {
public:
    explicit Rng(uint64_t seed) : eng_(seed) {}

    uint64_t next() { return eng_(); }

    /// Uniform integer in [0, m), rejection sampled.
    uint64_t below(uint64_t m) {
        if (m == 0) return 0;
        uint64_t lim = UINT64_MAX - UINT64_MAX % m;
        uint64_t v;
        do { v = eng_(); } while (v >= lim);
        return v % m;
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double real01() { return (eng_() >> 11) * 0x1.0p-53; }

    /// Uniform double in [-1, 1).
    double sym01() { return real01() * 2.0 - 1.0; }

    /// Independent stream for a sub-task (trial, worker, round...).
    static Rng stream(uint64_t seed, uint64_t idx) {
        // splitmix64 over (seed, idx) so trial streams are decorrelated
        uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (idx + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        z = z ^ (z >> 31);
        return Rng(z);
    }

private:
    std::mt19937_64 eng_;
};

} // namespace rhosum
