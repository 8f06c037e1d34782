#pragma once

// Deterministic, splittable randomness. A RandomStream is identified by
// (base_seed, stream_id); equal identifiers reproduce the same draw sequence
// bit for bit, distinct stream ids give independent streams. Trials own their
// stream by value, so Monte Carlo runs parallelize without shared state.
//
// uniform01/sample are hand-rolled on top of mt19937_64 output rather than
// <random> distributions, whose sequences differ across standard libraries.

#include <cstdint>
#include <random>

#include "zerosum/matrix.hpp"

namespace zerosum {

inline uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

class RandomStream {
public:
    RandomStream(uint64_t base_seed, uint64_t stream_id) : base_seed_(base_seed), stream_id_(stream_id) {
        uint64_t s = base_seed;
        uint64_t a = splitmix64(s);
        s ^= 0xD1B54A32D192ED03ull * (stream_id + 1);
        uint64_t b = splitmix64(s);
        engine_.seed(a ^ (b + 0x165667B19E3779F9ull + (stream_id << 1)));
    }

    uint64_t base_seed() const { return base_seed_; }
    uint64_t stream_id() const { return stream_id_; }

    uint64_t next_u64() { return engine_(); }

    // in [0,1)
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    int bernoulli(double p) { return uniform01() < p ? 1 : 0; }

    int sample(const Strategy& s) {
        const double u = uniform01();
        double cum = 0.0;
        const int n = s.size();
        for (int i = 0; i < n; ++i) {
            cum += s.w[i];
            if (u < cum) return i;
        }
        return n - 1;
    }

private:
    uint64_t base_seed_;
    uint64_t stream_id_;
    std::mt19937_64 engine_;
};

}  // namespace zerosum
