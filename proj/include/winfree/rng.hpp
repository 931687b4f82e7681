#pragma once

#include <cstdint>

namespace winfree {

// Counter-free splitmix64 stream. Fast, reproducible across platforms, and
// good enough for drawing initial phases; not meant for cryptography.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform on the open interval (0, 1): 53-bit mantissa offset by half a
    // step, so neither endpoint is reachable.
    double uniform_open() {
        return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Uniform on the open interval (lo, hi).
    double uniform_open(double lo, double hi) {
        return lo + (hi - lo) * uniform_open();
    }
};

// Key mixer for per-cell streams: cells seeded by (seed, coordinate indices)
// are independent of execution order.
inline std::uint64_t mix_key(std::uint64_t a, std::uint64_t b, std::uint64_t c = 0) {
    SplitMix64 m(a);
    m.state ^= m.next() + b;
    m.state ^= m.next() + c;
    return m.next();
}

}  // namespace winfree
