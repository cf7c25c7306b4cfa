#include "terralens/rng.hpp"

namespace terralens {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace

std::uint64_t Rng::next_u64() {
    state_ += kGolden;
    return mix(state_);
}

double Rng::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t Rng::below(std::uint64_t n) {
    // Lemire's rejection keeps the result unbiased.
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
        const std::uint64_t r = next_u64();
        const unsigned __int128 m = static_cast<unsigned __int128>(r) * n;
        if (static_cast<std::uint64_t>(m) >= threshold) {
            return static_cast<std::uint64_t>(m >> 64);
        }
    }
}

Rng Rng::split() {
    return Rng(mix(next_u64() ^ 0xD1B54A32D192ED03ULL));
}

Rng Rng::for_stream(std::uint64_t seed, std::uint64_t index) {
    return Rng(mix(seed ^ mix(index * kGolden + 0x632BE59BD9B4E019ULL)));
}

}  // namespace terralens
