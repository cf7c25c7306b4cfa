#pragma once

#include <cstdint>

namespace terralens {

/// SplitMix64 generator. Deterministic across platforms: every variate is
/// derived from the raw 64-bit stream without going through <random>
/// distributions, whose output is implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64();

    /// Uniform in [0, 1) with 53 random bits.
    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n);

    bool coin() { return (next_u64() >> 63) != 0; }

    /// Independent child stream; advances this generator by one step.
    Rng split();

    /// Stream for item `index` of a batch seeded with `seed`. Used to make
    /// batch output independent of generation order.
    static Rng for_stream(std::uint64_t seed, std::uint64_t index);

    std::uint64_t state() const { return state_; }

private:
    std::uint64_t state_;
};

}  // namespace terralens
