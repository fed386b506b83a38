#pragma once

#include <cstdint>
#include <random>

#include "loglm/tensor.hpp"

namespace loglm {

// Deterministic random source. The uniform mapping is pinned here rather than
// delegated to std distributions, whose output is implementation-defined, so
// a seed reproduces the same stream on any platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    // Uniform in [0, 1) with 53 random bits.
    Real uniform() { return static_cast<Real>(gen_() >> 11) * 0x1.0p-53; }

    Real uniform(Real lo, Real hi) { return lo + uniform() * (hi - lo); }

    // Uniform integer in [0, n).
    int uniform_int(int n) { return static_cast<int>(gen_() % static_cast<std::uint64_t>(n)); }

    std::uint64_t next() { return gen_(); }

    void fill_uniform(Tensor& t, Real lo, Real hi) {
        for (std::int64_t i = 0; i < t.size(); ++i) t[i] = uniform(lo, hi);
    }

    // Glorot-style init: uniform(-r, r) with r = sqrt(6 / (fan_in + fan_out)).
    void fill_glorot(Tensor& t, int fan_in, int fan_out) {
        const Real r = std::sqrt(Real(6) / (fan_in + fan_out));
        fill_uniform(t, -r, r);
    }

    // Stable per-(seed, stream) derivation for independent substreams.
    static std::uint64_t mix(std::uint64_t seed, std::uint64_t stream) {
        std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (stream + 1);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

private:
    std::mt19937_64 gen_;
};

} // namespace loglm
